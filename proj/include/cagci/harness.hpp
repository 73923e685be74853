#pragma once

#include "cagci/bound.hpp"
#include "cagci/fusion.hpp"
#include "cagci/gmphd.hpp"
#include "cagci/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cagci {

/// Output directory cannot be created or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FusionMode { standard_gci, ca_gci };

std::string to_string(FusionMode mode);

struct ExperimentConfig {
    Scenario scenario = table2_scenario();
    HousekeepingParams housekeeping;
    BirthParams birth;
    /// Also carries the OSPA (c, p) used for subset matching; evaluation
    /// uses `ospa_c` / `ospa_p` below.
    FusionParams fusion;
    double ospa_c = 30.0;
    double ospa_p = 2.0;
    int runs = 1;
    /// Empty: no CSV output.
    std::string output_dir;
    bool feedback = false;
    std::vector<FusionMode> modes{FusionMode::standard_gci, FusionMode::ca_gci};
    /// Components above this weight become estimates.
    double extraction_threshold = 0.5;
    /// Quasi-random samples for the filters' FoV-integrated p_D; 0 evaluates
    /// p_D at the component mean.
    int pd_samples = 64;
    /// Worker threads for Monte Carlo runs; results do not depend on it.
    int workers = 1;

    /// Throws ContractViolation naming the offending key.
    void validate() const;
};

/// Per-step traces of one tracker, averaged over runs.
struct TrackerTrace {
    std::string name;
    std::vector<double> ospa;
    std::vector<double> cardinality;
    double time_avg_ospa = 0.0;
};

struct RunReport {
    /// Local sensors ("sensor1", ...) first, then the enabled fusion modes.
    std::vector<TrackerTrace> trackers;
    std::vector<double> truth_cardinality;
    std::vector<double> run_seconds;

    /// Throws std::out_of_range for an unknown tracker.
    const TrackerTrace& tracker(const std::string& name) const;
};

/// One Monte Carlo run (not averaged); run index selects the RNG streams.
RunReport simulate_run(const ExperimentConfig& cfg, std::uint64_t run);

/// All runs, reduced in run-index order. Writes ospa.csv, cardinality.csv
/// and summary.csv when an output directory is configured; the directory is
/// checked before any run starts.
RunReport run_experiment(const ExperimentConfig& cfg);

void write_report(const RunReport& report, const std::filesystem::path& dir);

enum class SweepParameter { detect_prob, clutter_rate };

/// Parses "pd" or "clutter".
SweepParameter parse_sweep_parameter(const std::string& name);

struct SweepReport {
    SweepParameter parameter = SweepParameter::detect_prob;
    std::vector<double> values;
    std::vector<RunReport> reports;
};

/// One run_experiment per value with the parameter applied to every
/// sensor. Writes sweep.csv (one row per value, one column per tracker) and
/// per-value subdirectories when an output directory is configured.
SweepReport sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values);

struct SeparationPoint {
    double separation = 0.0;
    BoundReport report;
};

struct VerifyBoundReport {
    std::vector<BoundReport> cases;
    double holds_rate = 0.0;
    /// Two matched unit-variance pairs at increasing separation.
    std::vector<SeparationPoint> separation_sweep;
};

/// Random well-separated 1-D configurations checked against the bound.
VerifyBoundReport verify_bound(int cases, std::uint64_t seed);

/// Separation-sweep case: per sensor two unit-mass N(., 1) components
/// `separation` apart, sensor 2 shifted by `offset`; both pairs matched.
BoundProblem separated_pair_problem(double separation, double offset = 0.5);

}  // namespace cagci
