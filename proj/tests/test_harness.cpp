#include "cagci/config.hpp"
#include "cagci/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace cagci;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("cagci_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.scenario.steps = 15;
    cfg.runs = 2;
    return cfg;
}

}  // namespace

TEST(Config, DefaultsAndKeys) {
    const auto cfg = parse(R"(
# comment
[experiment]
runs = 7
seed = 42
modes = ca_gci
[scenario]
preset = example1
steps = 30
detect_prob = 0.9   ; trailing comment
[filter]
birth_mass = 0.05
area_margin = -1
pd_samples = 0
[fusion]
t_r = 20
[ospa]
c = 40
)");
    EXPECT_EQ(cfg.runs, 7);
    EXPECT_EQ(cfg.scenario.seed, 42u);
    ASSERT_EQ(cfg.modes.size(), 1u);
    EXPECT_EQ(cfg.modes[0], FusionMode::ca_gci);
    EXPECT_EQ(cfg.scenario.targets.size(), 2u);
    EXPECT_EQ(cfg.scenario.steps, 30);
    for (const auto& s : cfg.scenario.sensors) EXPECT_EQ(s.detect_prob, 0.9);
    EXPECT_EQ(cfg.birth.total_mass, 0.05);
    EXPECT_EQ(cfg.housekeeping.area_margin, -1.0);
    EXPECT_EQ(cfg.pd_samples, 0);
    EXPECT_EQ(cfg.fusion.t_r, 20.0);
    EXPECT_EQ(cfg.ospa_c, 40.0);
    EXPECT_EQ(cfg.fusion.ospa_c, 40.0);
}

TEST(Config, ErrorsNameTheKey) {
    auto message = [](const std::string& text) {
        try {
            parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("[filter]\nbogus = 1\n").find("bogus"), std::string::npos);
    EXPECT_NE(message("[nowhere]\n").find("nowhere"), std::string::npos);
    EXPECT_NE(message("[experiment]\nruns = 1x\n").find("runs"), std::string::npos);
    EXPECT_NE(message("[experiment]\nruns = 0\n").find("runs"), std::string::npos);
    EXPECT_NE(message("[fusion]\nomega1 = 0.7\n").find("omega"), std::string::npos);
    EXPECT_NE(message("[scenario]\ntarget = 1, 2, 3\n").find("target"), std::string::npos);
    EXPECT_THROW(load_config("/nonexistent/cagci.cfg"), ConfigError);
}

TEST(Config, ScenarioRoundTrip) {
    const auto s = table2_scenario();
    const auto cfg = parse("[scenario]\npreset = empty\n" + scenario_to_config(s).substr(std::string("[scenario]\n").size()));
    const auto& r = cfg.scenario;
    ASSERT_EQ(r.targets.size(), s.targets.size());
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
        EXPECT_EQ(r.targets[i].position, s.targets[i].position);
        EXPECT_EQ(r.targets[i].velocity, s.targets[i].velocity);
        EXPECT_EQ(r.targets[i].birth_time, s.targets[i].birth_time);
        EXPECT_EQ(r.targets[i].death_time, s.targets[i].death_time);
    }
    ASSERT_EQ(r.sensors.size(), 2u);
    EXPECT_EQ(r.sensors[1].position, s.sensors[1].position);
    EXPECT_EQ(r.steps, s.steps);
}

TEST(Config, ReferenceListsEveryKey) {
    const auto ref = config_reference();
    for (const char* key : {"runs", "seed", "preset", "detect_prob", "clutter_rate", "birth_mass", "area_margin",
                            "pd_samples", "omega_bar1", "delta", "gamma", "t_alpha", "t_d", "t_r"}) {
        EXPECT_NE(ref.find(key), std::string::npos) << key;
    }
}

TEST(Experiment, Validation) {
    auto cfg = small_config();
    cfg.feedback = true;
    cfg.scenario.sensors.resize(1);
    EXPECT_THROW(cfg.validate(), ContractViolation);
    cfg = small_config();
    cfg.workers = 0;
    EXPECT_THROW(cfg.validate(), ContractViolation);
}

TEST(Experiment, TrackerLayout) {
    const auto r = run_experiment(small_config());
    ASSERT_EQ(r.trackers.size(), 4u);
    EXPECT_EQ(r.trackers[0].name, "sensor1");
    EXPECT_EQ(r.trackers[2].name, "standard_gci");
    EXPECT_EQ(r.trackers[3].name, "ca_gci");
    EXPECT_EQ(r.truth_cardinality.size(), 15u);
    EXPECT_EQ(r.run_seconds.size(), 2u);
    EXPECT_THROW(r.tracker("nope"), std::out_of_range);
    for (const auto& t : r.trackers)
        for (double e : t.ospa) EXPECT_TRUE(e >= 0.0 && e <= 30.0);
}

TEST(Experiment, CsvBytesAreDeterministic) {
    const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
    auto cfg = small_config();
    cfg.runs = 1;
    cfg.output_dir = a.string();
    run_experiment(cfg);
    cfg.output_dir = b.string();
    run_experiment(cfg);
    for (const char* f : {"ospa.csv", "cardinality.csv", "summary.csv"}) {
        EXPECT_FALSE(slurp(a / f).empty());
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
    auto cfg = small_config();
    cfg.runs = 3;
    const auto one = run_experiment(cfg);
    cfg.workers = 3;
    const auto three = run_experiment(cfg);
    for (std::size_t i = 0; i < one.trackers.size(); ++i) {
        EXPECT_EQ(one.trackers[i].ospa, three.trackers[i].ospa);
        EXPECT_EQ(one.trackers[i].cardinality, three.trackers[i].cardinality);
    }
}

TEST(Experiment, UnwritableOutputFailsBeforeRunning) {
    const auto blocker = scratch_dir("blocker");
    std::ofstream(blocker) << "x";
    auto cfg = small_config();
    cfg.output_dir = (blocker / "sub").string();
    EXPECT_THROW(run_experiment(cfg), IoError);
    fs::remove(blocker);
}

TEST(Experiment, SingleSensorFusionIsLocal) {
    auto cfg = small_config();
    cfg.scenario.sensors.resize(1);
    const auto r = run_experiment(cfg);
    EXPECT_EQ(r.tracker("ca_gci").ospa, r.tracker("sensor1").ospa);
}

TEST(Experiment, FeedbackRuns) {
    auto cfg = small_config();
    cfg.feedback = true;
    EXPECT_NO_THROW(run_experiment(cfg));
}

TEST(Sweep, SingleValueEqualsRun) {
    auto cfg = small_config();
    const auto s = sweep(cfg, SweepParameter::detect_prob, {0.9});
    for (auto& sensor : cfg.scenario.sensors) sensor.detect_prob = 0.9;
    const auto r = run_experiment(cfg);
    ASSERT_EQ(s.reports.size(), 1u);
    for (std::size_t i = 0; i < r.trackers.size(); ++i) EXPECT_EQ(s.reports[0].trackers[i].ospa, r.trackers[i].ospa);
    EXPECT_EQ(parse_sweep_parameter("clutter"), SweepParameter::clutter_rate);
    EXPECT_THROW(parse_sweep_parameter("x"), ContractViolation);
}

TEST(Sweep, WritesTable) {
    const auto dir = scratch_dir("sweep");
    auto cfg = small_config();
    cfg.runs = 1;
    cfg.output_dir = dir.string();
    sweep(cfg, SweepParameter::clutter_rate, {10, 30});
    const auto text = slurp(dir / "sweep.csv");
    EXPECT_EQ(text.rfind("clutter,sensor1,sensor2,standard_gci,ca_gci\n", 0), 0u);
    EXPECT_TRUE(fs::exists(dir / "clutter_10" / "ospa.csv"));
    fs::remove_all(dir);
}
