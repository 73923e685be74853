#pragma once

#include "cagci/fov.hpp"
#include "cagci/gmphd.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace cagci {

/// Straight-line target with a lifetime [birth_time, death_time) in seconds.
struct TargetSpec {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
    double birth_time = 0.0;
    double death_time = 0.0;
};

/// Sensor with a sector FoV around its boresight.
struct SensorSpec {
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double fov_lo_deg = -60.0;
    double fov_hi_deg = 60.0;
    /// Clockwise from +y.
    double boresight_deg = 0.0;
    double detect_prob = 0.95;
    double noise_std = 10.0;
    double clutter_rate = 20.0;

    Sector sector() const;
    /// Sector clipped to the surveillance area.
    FieldOfView fov(const Rect& area) const;
};

struct Scenario {
    Rect area{0.0, 1500.0, 0.0, 1000.0};
    int steps = 80;
    double ts = 1.0;
    double process_noise_std = 2.0;
    double survival_prob = 0.99;
    bool noisy_truth = false;
    std::vector<TargetSpec> targets;
    std::vector<SensorSpec> sensors;
    std::uint64_t seed = 1;

    /// Time (s) of step k; steps are 0-based and step k ends at (k + 1) ts.
    double time_of(int step) const { return ts * static_cast<double>(step + 1); }

    /// Throws ContractViolation on an inconsistent configuration.
    void validate() const;
};

struct TruthEntry {
    std::size_t target = 0;
    /// [px, vx, py, vy]
    Eigen::Vector4d state;
};
using TruthStep = std::vector<TruthEntry>;
using Truth = std::vector<TruthStep>;

/// Seed of the random stream owned by (run, stream, step); independent of
/// evaluation order.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream, std::uint64_t step);

/// Ground truth per step. Without noise the targets follow their nominal
/// constant-velocity paths; with noise the paths are perturbed by the CV
/// process noise drawn from the run's own stream.
Truth generate_truth(const Scenario& s, bool noisy, std::uint64_t run = 0);

/// Whether `position` lies in the sensor's angular sector (closed bounds;
/// the sensor position itself counts as inside).
bool in_fov(const SensorSpec& sensor, const Eigen::Vector2d& position);

/// Detections of in-FoV targets (probability p_D, Gaussian noise) plus
/// Poisson clutter uniform over the area, in shuffled order.
MeasurementSet generate_measurements(const TruthStep& truth, const SensorSpec& sensor, const Rect& area,
                                     std::mt19937_64& rng);

/// Two-sensor, eleven-target benchmark scenario.
Scenario table2_scenario();

/// Two targets, each visible to exactly one of the two sensors.
Scenario example1_scenario();

/// One target seen by one sensor with p_D = 1 and no clutter.
Scenario single_target_scenario();

}  // namespace cagci
