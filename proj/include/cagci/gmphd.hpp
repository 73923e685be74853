#pragma once

#include "cagci/fov.hpp"
#include "cagci/gaussian.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace cagci {

using Measurement = Eigen::VectorXd;
using MeasurementSet = std::vector<Measurement>;

/// Linear-Gaussian single-target motion with constant survival probability.
struct MotionModel {
    Eigen::MatrixXd transition;
    Eigen::MatrixXd process_noise;
    double survival_prob = 0.99;
    double step = 1.0;

    /// Nearly-constant-velocity model in the [px, vx, py, vy] layout with
    /// white acceleration noise of standard deviation `sigma_w` (m/s^2).
    static MotionModel constant_velocity(double ts, double sigma_w, double survival_prob);
};

/// Linear-Gaussian sensor with uniform Poisson clutter over a rectangle.
/// When `fov` is set, the detection probability is `detect_prob_in_fov`
/// for states whose position lies in the FoV and zero elsewhere.
struct MeasurementModel {
    Eigen::MatrixXd observation;
    Eigen::MatrixXd noise;
    double detect_prob_in_fov = 0.95;
    double clutter_rate = 0.0;
    Rect surveillance_area;
    std::optional<FieldOfView> fov;
    /// 0: p_D is evaluated at the component mean. Otherwise p_D is scaled by
    /// the fraction of the component's positional mass inside the FoV,
    /// estimated with this many quasi-random samples.
    int fov_samples = 0;

    /// Position-only observation H = [1 0 0 0; 0 0 1 0] with R = sigma^2 I.
    static MeasurementModel position_sensor(double sigma, double detect_prob, double clutter_rate,
                                            Rect area, std::optional<FieldOfView> fov = std::nullopt);

    double detect_prob(const Eigen::VectorXd& state) const;
    /// Detection probability applied to a whole component (see fov_samples).
    double detect_prob(const GaussianComponent& c) const;
    /// kappa(z) = lambda_c / area
    double clutter_density() const;
};

/// Pruning/merging/capping applied after every update.
struct HousekeepingParams {
    double prune_threshold = 1e-5;
    /// Squared Mahalanobis distance with respect to the dominant component.
    double merge_threshold = 9.0;
    std::size_t max_components = 100;
    /// Components whose position lies farther than this outside the
    /// surveillance area are dropped after the update. Negative disables.
    double area_margin = 30.0;
};

/// Measurement-driven birth intensity.
struct BirthParams {
    /// Expected number of newborn targets per scan, split evenly over the
    /// measurements of the previous scan.
    double total_mass = 0.01;
    double velocity_std = 15.0;
    /// Position covariance is `position_inflation * R`.
    double position_inflation = 2.0;
};

/// Prediction: surviving components pass through (F, Q) with weight
/// p_S alpha; birth components are appended unchanged.
GaussianMixture predict(const GaussianMixture& prev, const MotionModel& motion,
                        const GaussianMixture& birth);

/// Measurement update of a Gaussian-mixture PHD.
GaussianMixture update(const GaussianMixture& predicted, const MeasurementSet& z,
                       const MeasurementModel& meas);

/// One component per previous-scan measurement (measurements outside the
/// sensor FoV are ignored when the model carries one).
GaussianMixture adaptive_birth(const MeasurementSet& z_prev, const BirthParams& params,
                               const MeasurementModel& meas);

/// Standard GM-PHD housekeeping. Output keeps the relative order of the
/// surviving (dominant) components.
GaussianMixture prune_merge(const GaussianMixture& v, const HousekeepingParams& hk);

/// Means of the components whose weight exceeds `threshold` (one estimate
/// per component).
std::vector<Eigen::VectorXd> extract_estimates(const GaussianMixture& v, double threshold = 0.5);

/// round(mass), halves rounded up.
std::size_t estimated_cardinality(const GaussianMixture& v);

/// A GM-PHD filter instance: posterior plus the previous scan used to seed
/// births.
class GmPhdFilter {
public:
    GmPhdFilter(MotionModel motion, MeasurementModel meas, HousekeepingParams hk, BirthParams birth);

    /// birth(Z_{k-1}) -> predict -> update(Z_k) -> prune_merge.
    void step(const MeasurementSet& z);

    const GaussianMixture& posterior() const { return posterior_; }
    void set_posterior(GaussianMixture v) { posterior_ = std::move(v); }

    const MotionModel& motion() const { return motion_; }
    const MeasurementModel& measurement_model() const { return meas_; }

private:
    MotionModel motion_;
    MeasurementModel meas_;
    HousekeepingParams hk_;
    BirthParams birth_;
    GaussianMixture posterior_;
    MeasurementSet previous_scan_;
};

}  // namespace cagci
