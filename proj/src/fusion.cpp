#include "cagci/fusion.hpp"

#include <cmath>
#include <string>

namespace cagci {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation("fusion params: " + what);
}

// Preserved term delta^(1 - w) [v]^w.
GaussianMixture compensated(const GaussianMixture& preserved, double delta, double omega_bar) {
    GaussianMixture out;
    if (preserved.empty()) return out;
    if (delta == 0.0 && omega_bar < 1.0) return out;
    if (!(omega_bar > 0.0)) {
        throw ContractViolation("compensate_fuse: a non-empty preserved intensity needs omega_bar in (0, 1]");
    }
    const double scale = std::pow(delta, 1.0 - omega_bar);
    for (const auto& c : preserved) {
        auto p = component_power(c, omega_bar);
        p.weight *= scale;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

void FusionParams::validate() const {
    require(omega1 > 0.0 && omega1 <= 1.0, "omega1 must lie in (0, 1]");
    require(omega2 > 0.0 && omega2 <= 1.0, "omega2 must lie in (0, 1]");
    require(std::abs(omega1 + omega2 - 1.0) <= 1e-12, "omega1 + omega2 must equal 1");
    require(omega_bar1 >= 0.0 && omega_bar1 <= 1.0, "omega_bar1 must lie in [0, 1]");
    require(omega_bar2 >= 0.0 && omega_bar2 <= 1.0, "omega_bar2 must lie in [0, 1]");
    require(delta >= 0.0, "delta must be nonnegative");
    require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    require(t_alpha > 0.0, "t_alpha must be positive");
    require(t_d > 0.0, "t_d must be positive");
    require(t_r > 0.0, "t_r must be positive");
    require(ospa_c > 0.0, "ospa_c must be positive");
    require(ospa_p >= 1.0, "ospa_p must be >= 1");
    require(fov_samples >= 1, "fov_samples must be positive");
}

GaussianMixture gci_fuse_standard(const GaussianMixture& v1, const GaussianMixture& v2, double omega1,
                                  double omega2) {
    if (!(omega1 > 0.0 && omega1 <= 1.0 && omega2 > 0.0 && omega2 <= 1.0) ||
        std::abs(omega1 + omega2 - 1.0) > 1e-12) {
        throw ContractViolation("gci_fuse_standard: weights must lie in (0, 1] and sum to 1");
    }
    GaussianMixture out;
    if (v1.empty() || v2.empty()) return out;
    const auto p1 = mixture_power(v1, omega1);
    const auto p2 = mixture_power(v2, omega2);
    out.components.reserve(p1.size() * p2.size());
    for (const auto& a : p1) {
        for (const auto& b : p2) out.push_back(pairwise_fuse(a, b));
    }
    return out;
}

GaussianMixture gci_fuse_parallel(const GaussianMixture& v1, const ClusterDecomposition& l1,
                                  const GaussianMixture& v2, const ClusterDecomposition& l2,
                                  const MatchResult& match, double omega1, double omega2) {
    GaussianMixture out;
    for (const auto& [p, q] : match.matched_pairs) {
        if (p >= l1.size() || q >= l2.size()) throw ContractViolation("gci_fuse_parallel: match out of range");
        out.append(gci_fuse_standard(v1.subset(l1.subsets[p]), v2.subset(l2.subsets[q]), omega1, omega2));
    }
    return out;
}

std::vector<bool> select_preserved(const std::vector<GaussianMixture>& difs, const FieldOfView& other_fov,
                                   double gamma, int samples) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ContractViolation("select_preserved: gamma must lie in (0, 1)");
    std::vector<bool> beta;
    beta.reserve(difs.size());
    for (const auto& dif : difs) {
        const double mass = mixture_mass(dif);
        if (!(mass > 0.0)) {
            beta.push_back(false);
            continue;
        }
        beta.push_back(fov_mass(dif, other_fov, samples) <= gamma * mass);
    }
    return beta;
}

GaussianMixture compensate_fuse(const GaussianMixture& matched_fused, const GaussianMixture& preserved1,
                                const GaussianMixture& preserved2, double delta, double omega_bar1,
                                double omega_bar2) {
    if (!(delta >= 0.0)) throw ContractViolation("compensate_fuse: delta must be nonnegative");
    if (!(omega_bar1 >= 0.0 && omega_bar1 <= 1.0 && omega_bar2 >= 0.0 && omega_bar2 <= 1.0)) {
        throw ContractViolation("compensate_fuse: omega_bar must lie in [0, 1]");
    }
    GaussianMixture out = matched_fused;
    out.append(compensated(preserved1, delta, omega_bar1));
    out.append(compensated(preserved2, delta, omega_bar2));
    return out;
}

CaGciResult ca_gci_fuse_detailed(const GaussianMixture& v1, const GaussianMixture& v2,
                                 const FieldOfView& fov1, const FieldOfView& fov2,
                                 const FusionParams& params) {
    params.validate();
    CaGciResult r;
    r.decomposition1 = cluster_mixture(v1, params.t_alpha, params.t_d);
    r.decomposition2 = cluster_mixture(v2, params.t_alpha, params.t_d);
    r.match = match_subsets(v1, r.decomposition1, v2, r.decomposition2, params.t_r, params.ospa_c,
                            params.ospa_p);

    std::vector<GaussianMixture> unmatched1, unmatched2;
    for (auto p : r.match.unmatched_1) unmatched1.push_back(v1.subset(r.decomposition1.subsets[p]));
    for (auto q : r.match.unmatched_2) unmatched2.push_back(v2.subset(r.decomposition2.subsets[q]));
    r.beta1 = select_preserved(unmatched1, fov2, params.gamma, params.fov_samples);
    r.beta2 = select_preserved(unmatched2, fov1, params.gamma, params.fov_samples);
    for (std::size_t i = 0; i < unmatched1.size(); ++i) {
        if (r.beta1[i]) r.preserved1.append(unmatched1[i]);
    }
    for (std::size_t i = 0; i < unmatched2.size(); ++i) {
        if (r.beta2[i]) r.preserved2.append(unmatched2[i]);
    }

    r.matched_fused = gci_fuse_parallel(v1, r.decomposition1, v2, r.decomposition2, r.match, params.omega1,
                                        params.omega2);
    r.fused = compensate_fuse(r.matched_fused, r.preserved1, r.preserved2, params.delta, params.omega_bar1,
                              params.omega_bar2);
    return r;
}

GaussianMixture ca_gci_fuse(const GaussianMixture& v1, const GaussianMixture& v2, const FieldOfView& fov1,
                            const FieldOfView& fov2, const FusionParams& params) {
    return ca_gci_fuse_detailed(v1, v2, fov1, fov2, params).fused;
}

GaussianMixture sequential_fuse(const std::vector<std::pair<GaussianMixture, FieldOfView>>& phds,
                                const FusionParams& params) {
    if (phds.empty()) throw ContractViolation("sequential_fuse: no intensities given");
    GaussianMixture acc = phds.front().first;
    FieldOfView acc_fov = phds.front().second;
    for (std::size_t k = 1; k < phds.size(); ++k) {
        FusionParams stage = params;
        const double kk = static_cast<double>(k);
        stage.omega1 = kk / (kk + 1.0);
        stage.omega2 = 1.0 - stage.omega1;
        acc = ca_gci_fuse(acc, phds[k].first, acc_fov, phds[k].second, stage);
        acc_fov = acc_fov.united(phds[k].second);
    }
    return acc;
}

}  // namespace cagci
