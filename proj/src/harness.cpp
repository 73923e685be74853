#include "cagci/harness.hpp"

#include "cagci/metrics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace cagci {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ContractViolation(what);
}

PointSet estimate_positions(const GaussianMixture& v, double threshold) {
    PointSet out;
    for (const auto& m : extract_estimates(v, threshold)) out.push_back(Eigen::Vector2d(m(0), m(2)));
    return out;
}

PointSet truth_positions(const TruthStep& truth) {
    PointSet out;
    for (const auto& t : truth) out.push_back(Eigen::Vector2d(t.state(0), t.state(2)));
    return out;
}

GaussianMixture standard_fold(const std::vector<const GaussianMixture*>& locals) {
    GaussianMixture acc = *locals.front();
    for (std::size_t k = 1; k < locals.size(); ++k) {
        const double kk = static_cast<double>(k);
        acc = gci_fuse_standard(acc, *locals[k], kk / (kk + 1.0), 1.0 / (kk + 1.0));
    }
    return acc;
}

GaussianMixture in_fov_only(const GaussianMixture& v, const FieldOfView& fov) {
    GaussianMixture out;
    for (const auto& c : v) {
        if (fov.contains(Eigen::Vector2d(c.mean(0), c.mean(2)))) out.push_back(c);
    }
    return out;
}

std::filesystem::path prepare_output(const std::string& dir) {
    const std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    const auto probe = p / ".write_probe";
    {
        std::ofstream f(probe);
        if (!f) throw IoError("output directory '" + dir + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
    return p;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << std::setprecision(10);
    return f;
}

RunReport reduce(const std::vector<RunReport>& runs) {
    RunReport out = runs.front();
    out.run_seconds.clear();
    const double n = static_cast<double>(runs.size());
    for (auto& t : out.trackers) {
        std::fill(t.ospa.begin(), t.ospa.end(), 0.0);
        std::fill(t.cardinality.begin(), t.cardinality.end(), 0.0);
    }
    std::fill(out.truth_cardinality.begin(), out.truth_cardinality.end(), 0.0);
    for (const auto& r : runs) {
        for (std::size_t i = 0; i < out.trackers.size(); ++i) {
            for (std::size_t k = 0; k < r.trackers[i].ospa.size(); ++k) {
                out.trackers[i].ospa[k] += r.trackers[i].ospa[k];
                out.trackers[i].cardinality[k] += r.trackers[i].cardinality[k];
            }
        }
        for (std::size_t k = 0; k < r.truth_cardinality.size(); ++k) {
            out.truth_cardinality[k] += r.truth_cardinality[k];
        }
        out.run_seconds.push_back(r.run_seconds.front());
    }
    for (auto& t : out.trackers) {
        double sum = 0.0;
        for (std::size_t k = 0; k < t.ospa.size(); ++k) {
            t.ospa[k] /= n;
            t.cardinality[k] /= n;
            sum += t.ospa[k];
        }
        t.time_avg_ospa = t.ospa.empty() ? 0.0 : sum / static_cast<double>(t.ospa.size());
    }
    for (auto& c : out.truth_cardinality) c /= n;
    return out;
}

}  // namespace

std::string to_string(FusionMode mode) {
    return mode == FusionMode::standard_gci ? "standard_gci" : "ca_gci";
}

void ExperimentConfig::validate() const {
    try {
        scenario.validate();
    } catch (const ContractViolation& e) {
        throw ContractViolation(std::string("[scenario] ") + e.what());
    }
    require(!scenario.sensors.empty(), "[scenario] sensor: at least one sensor is required");
    try {
        fusion.validate();
    } catch (const ContractViolation& e) {
        throw ContractViolation(std::string("[fusion] ") + e.what());
    }
    require(runs >= 1, "[experiment] runs must be >= 1");
    require(workers >= 1, "[experiment] workers must be >= 1");
    require(ospa_c > 0.0, "[ospa] c must be positive");
    require(ospa_p >= 1.0, "[ospa] p must be >= 1");
    require(extraction_threshold >= 0.0, "[experiment] extraction_threshold must be nonnegative");
    require(housekeeping.prune_threshold >= 0.0, "[filter] prune_threshold must be nonnegative");
    require(housekeeping.merge_threshold >= 0.0, "[filter] merge_threshold must be nonnegative");
    require(housekeeping.max_components >= 1, "[filter] max_components must be >= 1");
    require(pd_samples >= 0, "[filter] pd_samples must be nonnegative");
    require(birth.total_mass >= 0.0, "[filter] birth_mass must be nonnegative");
    require(birth.velocity_std > 0.0, "[filter] birth_velocity_std must be positive");
    require(birth.position_inflation > 0.0, "[filter] birth_position_inflation must be positive");
    require(!feedback || scenario.sensors.size() == 2, "[experiment] feedback requires exactly two sensors");
}

const TrackerTrace& RunReport::tracker(const std::string& name) const {
    for (const auto& t : trackers) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("no tracker named '" + name + "'");
}

RunReport simulate_run(const ExperimentConfig& cfg, std::uint64_t run) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario& s = cfg.scenario;
    const std::size_t n_sensors = s.sensors.size();
    const auto steps = static_cast<std::size_t>(s.steps);
    const Truth truth = generate_truth(s, s.noisy_truth, run);
    const auto motion = MotionModel::constant_velocity(s.ts, s.process_noise_std, s.survival_prob);

    std::vector<GmPhdFilter> filters;
    std::vector<FieldOfView> fovs;
    for (const auto& sensor : s.sensors) {
        fovs.push_back(sensor.fov(s.area));
        auto meas = MeasurementModel::position_sensor(sensor.noise_std, sensor.detect_prob, sensor.clutter_rate,
                                                      s.area, FieldOfView(sensor.sector()));
        meas.fov_samples = cfg.pd_samples;
        filters.emplace_back(motion, meas, cfg.housekeeping, cfg.birth);
    }

    RunReport r;
    for (std::size_t l = 0; l < n_sensors; ++l) r.trackers.push_back({"sensor" + std::to_string(l + 1), {}, {}, 0.0});
    for (auto m : cfg.modes) r.trackers.push_back({to_string(m), {}, {}, 0.0});
    for (auto& t : r.trackers) {
        t.ospa.assign(steps, 0.0);
        t.cardinality.assign(steps, 0.0);
    }
    r.truth_cardinality.assign(steps, 0.0);

    auto score = [&](std::size_t tracker, std::size_t k, const GaussianMixture& v, const PointSet& x) {
        const PointSet est = estimate_positions(v, cfg.extraction_threshold);
        r.trackers[tracker].ospa[k] = ospa(est, x, cfg.ospa_c, cfg.ospa_p);
        r.trackers[tracker].cardinality[k] = static_cast<double>(est.size());
    };

    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t l = 0; l < n_sensors; ++l) {
            std::mt19937_64 rng(stream_seed(s.seed, run, l, k));
            filters[l].step(generate_measurements(truth[k], s.sensors[l], s.area, rng));
        }
        const PointSet x = truth_positions(truth[k]);
        r.truth_cardinality[k] = static_cast<double>(x.size());
        std::vector<const GaussianMixture*> locals;
        for (std::size_t l = 0; l < n_sensors; ++l) {
            locals.push_back(&filters[l].posterior());
            score(l, k, filters[l].posterior(), x);
        }

        std::optional<CaGciResult> detailed;
        for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
            GaussianMixture fused;
            if (n_sensors == 1) {
                fused = *locals.front();
            } else if (cfg.modes[m] == FusionMode::standard_gci) {
                fused = standard_fold(locals);
            } else if (n_sensors == 2) {
                detailed = ca_gci_fuse_detailed(*locals[0], *locals[1], fovs[0], fovs[1], cfg.fusion);
                fused = detailed->fused;
            } else {
                std::vector<std::pair<GaussianMixture, FieldOfView>> phds;
                for (std::size_t l = 0; l < n_sensors; ++l) phds.emplace_back(*locals[l], fovs[l]);
                fused = sequential_fuse(phds, cfg.fusion);
            }
            score(n_sensors + m, k, n_sensors == 1 ? fused : prune_merge(fused, cfg.housekeeping), x);
        }

        if (cfg.feedback) {
            if (!detailed) {
                detailed = ca_gci_fuse_detailed(*locals[0], *locals[1], fovs[0], fovs[1], cfg.fusion);
            }
            for (std::size_t l = 0; l < 2; ++l) {
                GaussianMixture v = in_fov_only(detailed->matched_fused, fovs[l]);
                v.append(l == 0 ? detailed->preserved1 : detailed->preserved2);
                filters[l].set_posterior(prune_merge(v, cfg.housekeeping));
            }
        }
    }
    for (auto& t : r.trackers) {
        double sum = 0.0;
        for (double e : t.ospa) sum += e;
        t.time_avg_ospa = steps ? sum / static_cast<double>(steps) : 0.0;
    }
    r.run_seconds = {std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
    return r;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::filesystem::path out;
    if (!cfg.output_dir.empty()) out = prepare_output(cfg.output_dir);

    const auto n_runs = static_cast<std::size_t>(cfg.runs);
    std::vector<RunReport> runs(n_runs);
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n_runs);
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n_runs; ++i) runs[i] = simulate_run(cfg, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n_runs; i = next++) {
                    try {
                        runs[i] = simulate_run(cfg, i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = n_runs;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    RunReport report = reduce(runs);
    if (!out.empty()) write_report(report, out);
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
    auto ospa_csv = open_csv(dir / "ospa.csv");
    auto card_csv = open_csv(dir / "cardinality.csv");
    auto summary_csv = open_csv(dir / "summary.csv");
    ospa_csv << "step,tracker,mean_ospa\n";
    card_csv << "step,tracker,mean_est,truth\n";
    summary_csv << "tracker,time_avg_ospa\n";
    const std::size_t steps = report.truth_cardinality.size();
    for (std::size_t k = 0; k < steps; ++k) {
        for (const auto& t : report.trackers) {
            ospa_csv << k << ',' << t.name << ',' << t.ospa[k] << '\n';
            card_csv << k << ',' << t.name << ',' << t.cardinality[k] << ',' << report.truth_cardinality[k] << '\n';
        }
    }
    for (const auto& t : report.trackers) summary_csv << t.name << ',' << t.time_avg_ospa << '\n';
}

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "pd") return SweepParameter::detect_prob;
    if (name == "clutter") return SweepParameter::clutter_rate;
    throw ContractViolation("sweep parameter must be 'pd' or 'clutter', got '" + name + "'");
}

SweepReport sweep(const ExperimentConfig& cfg, SweepParameter parameter, const std::vector<double>& values) {
    if (values.empty()) throw ContractViolation("sweep: no values given");
    cfg.validate();
    std::filesystem::path out;
    if (!cfg.output_dir.empty()) out = prepare_output(cfg.output_dir);

    SweepReport report;
    report.parameter = parameter;
    report.values = values;
    const char* label = parameter == SweepParameter::detect_prob ? "pd" : "clutter";
    for (double value : values) {
        ExperimentConfig c = cfg;
        for (auto& sensor : c.scenario.sensors) {
            if (parameter == SweepParameter::detect_prob) {
                sensor.detect_prob = value;
            } else {
                sensor.clutter_rate = value;
            }
        }
        if (!out.empty()) {
            std::ostringstream name;
            name << label << '_' << value;
            c.output_dir = (out / name.str()).string();
        }
        report.reports.push_back(run_experiment(c));
    }

    if (!out.empty()) {
        auto csv = open_csv(out / "sweep.csv");
        csv << label;
        for (const auto& t : report.reports.front().trackers) csv << ',' << t.name;
        csv << '\n';
        for (std::size_t i = 0; i < values.size(); ++i) {
            csv << values[i];
            for (const auto& t : report.reports[i].trackers) csv << ',' << t.time_avg_ospa;
            csv << '\n';
        }
    }
    return report;
}

namespace {

GaussianMixture gaussian_1d(const std::vector<std::array<double, 3>>& terms) {
    GaussianMixture v;
    for (const auto& [w, m, sd] : terms) {
        GaussianComponent c;
        c.weight = w;
        c.mean = Eigen::VectorXd::Constant(1, m);
        c.cov = Eigen::MatrixXd::Constant(1, 1, sd * sd);
        v.push_back(std::move(c));
    }
    return v;
}

constexpr double kGridMargin = 12.0;
constexpr double kGridSpacing = 0.01;

Grid1D grid_around(double lo, double hi) {
    Grid1D g;
    g.start = lo - kGridMargin;
    g.spacing = kGridSpacing;
    g.size = static_cast<std::size_t>(std::ceil((hi - lo + 2.0 * kGridMargin) / kGridSpacing)) + 1;
    return g;
}

}  // namespace

BoundProblem separated_pair_problem(double separation, double offset) {
    const auto a1 = gaussian_1d({{1.0, 0.0, 1.0}});
    const auto b1 = gaussian_1d({{1.0, separation, 1.0}});
    const auto a2 = gaussian_1d({{1.0, offset, 1.0}});
    const auto b2 = gaussian_1d({{1.0, separation + offset, 1.0}});
    const Grid1D g = grid_around(std::min(0.0, offset), separation + std::max(0.0, offset));
    BoundProblem pb;
    pb.difs1 = {GridFunction1D::sample(a1, g), GridFunction1D::sample(b1, g)};
    pb.difs2 = {GridFunction1D::sample(a2, g), GridFunction1D::sample(b2, g)};
    pb.matched = 2;
    return pb;
}

VerifyBoundReport verify_bound(int cases, std::uint64_t seed) {
    if (cases < 1) throw ContractViolation("verify_bound: cases must be >= 1");
    VerifyBoundReport report;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_int_distribution<int> terms(1, 2);
    std::uniform_real_distribution<double> weight(0.3, 1.5);
    std::uniform_real_distribution<double> sd(0.5, 1.0);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    std::uniform_real_distribution<double> gap(10.0, 20.0);
    std::uniform_real_distribution<double> omega(0.1, 0.9);

    auto random_dif = [&](double center) {
        std::vector<std::array<double, 3>> t;
        const int n = terms(rng);
        for (int i = 0; i < n; ++i) t.push_back({weight(rng), center + (i == 0 ? 0.0 : jitter(rng)), sd(rng)});
        return gaussian_1d(t);
    };

    std::size_t held = 0;
    for (int c = 0; c < cases; ++c) {
        const auto m1 = static_cast<std::size_t>(count(rng));
        const auto m2 = static_cast<std::size_t>(count(rng));
        const auto q = std::uniform_int_distribution<std::size_t>(0, std::min(m1, m2))(rng);
        const std::size_t cells = m1 + m2 - q;

        // Cell positions along the line, in random order.
        std::vector<double> centers(cells);
        double x = 0.0;
        for (auto& ctr : centers) {
            ctr = x;
            x += gap(rng);
        }
        std::shuffle(centers.begin(), centers.end(), rng);

        std::vector<GaussianMixture> d1, d2;
        for (std::size_t p = 0; p < q; ++p) {
            d1.push_back(random_dif(centers[p]));
            d2.push_back(random_dif(centers[p] + jitter(rng)));
        }
        for (std::size_t p = q; p < m1; ++p) d1.push_back(random_dif(centers[p]));
        for (std::size_t p = m1; p < cells; ++p) d2.push_back(random_dif(centers[p]));

        const auto [lo, hi] = std::minmax_element(centers.begin(), centers.end());
        const Grid1D g = grid_around(*lo, *hi);
        BoundProblem pb;
        for (const auto& d : d1) pb.difs1.push_back(GridFunction1D::sample(d, g));
        for (const auto& d : d2) pb.difs2.push_back(GridFunction1D::sample(d, g));
        pb.matched = q;
        pb.omega1 = omega(rng);
        pb.omega2 = 1.0 - pb.omega1;
        report.cases.push_back(bound_check(pb));
        if (report.cases.back().holds) ++held;
    }
    report.holds_rate = static_cast<double>(held) / static_cast<double>(cases);

    for (double sep : {2.0, 5.0, 10.0, 20.0}) report.separation_sweep.push_back({sep, bound_check(separated_pair_problem(sep))});
    return report;
}

}  // namespace cagci
