#pragma once

#include "cagci/clustering.hpp"
#include "cagci/fov.hpp"
#include "cagci/gaussian.hpp"

#include <utility>
#include <vector>

namespace cagci {

/// Parameters of the clustering-based GCI fusion. Defaults are the values
/// used for the two-sensor benchmark.
struct FusionParams {
    /// Weights of the matched (common-FoV) fusion; must sum to one.
    double omega1 = 0.5;
    double omega2 = 0.5;
    /// Exponents applied to the preserved intensities.
    double omega_bar1 = 0.8;
    double omega_bar2 = 0.8;
    /// Compensation intensity (confidence factor).
    double delta = 0.9;
    /// Observed-by threshold.
    double gamma = 0.5;
    double t_alpha = 0.02;
    /// Threshold on the corrected Mahalanobis quadratic form (no square root).
    double t_d = 15.0;
    /// Subset match gate on the OSPA distance (m).
    double t_r = 15.0;
    double ospa_c = 30.0;
    double ospa_p = 2.0;
    int fov_samples = kDefaultFovSamples;

    /// Throws ContractViolation naming the offending field.
    void validate() const;
};

/// Full cross-product GCI: every component of [v1]^w1 against every
/// component of [v2]^w2 (N1 * N2 terms, v1-major order).
GaussianMixture gci_fuse_standard(const GaussianMixture& v1, const GaussianMixture& v2, double omega1,
                                  double omega2);

/// Parallelized GCI: standard GCI applied to each matched DIF pair, the
/// results concatenated in pair order.
GaussianMixture gci_fuse_parallel(const GaussianMixture& v1, const ClusterDecomposition& l1,
                                  const GaussianMixture& v2, const ClusterDecomposition& l2,
                                  const MatchResult& match, double omega1, double omega2);

/// beta flag per DIF: true (preserve) iff the DIF's mass inside `other_fov`
/// is at most gamma times its total mass. Zero-mass DIFs are deleted.
std::vector<bool> select_preserved(const std::vector<GaussianMixture>& difs, const FieldOfView& other_fov,
                                   double gamma, int samples = kDefaultFovSamples);

/// matched_fused + delta^(1 - wb1) [preserved1]^wb1 + delta^(1 - wb2) [preserved2]^wb2
GaussianMixture compensate_fuse(const GaussianMixture& matched_fused, const GaussianMixture& preserved1,
                                const GaussianMixture& preserved2, double delta, double omega_bar1,
                                double omega_bar2);

/// Every intermediate product of one CA-GCI fusion.
struct CaGciResult {
    GaussianMixture fused;
    GaussianMixture matched_fused;
    /// Preserved components in their original (un-exponentiated) form.
    GaussianMixture preserved1;
    GaussianMixture preserved2;
    ClusterDecomposition decomposition1;
    ClusterDecomposition decomposition2;
    MatchResult match;
    /// beta flags aligned with match.unmatched_1 / match.unmatched_2.
    std::vector<bool> beta1;
    std::vector<bool> beta2;
};

/// Cluster, match, select preserved DIFs, fuse matched DIFs in parallel,
/// then add the compensated preserved intensities.
CaGciResult ca_gci_fuse_detailed(const GaussianMixture& v1, const GaussianMixture& v2,
                                 const FieldOfView& fov1, const FieldOfView& fov2,
                                 const FusionParams& params);

GaussianMixture ca_gci_fuse(const GaussianMixture& v1, const GaussianMixture& v2, const FieldOfView& fov1,
                            const FieldOfView& fov2, const FusionParams& params);

/// Left fold of ca_gci_fuse. Folding the (k+1)-th sensor into a k-sensor
/// aggregate uses weights (k/(k+1), 1/(k+1)); the aggregate's FoV is the
/// union of the FoVs folded so far.
GaussianMixture sequential_fuse(const std::vector<std::pair<GaussianMixture, FieldOfView>>& phds,
                                const FusionParams& params);

}  // namespace cagci
