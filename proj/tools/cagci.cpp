#include "cagci/config.hpp"
#include "cagci/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw cagci::ConfigError("--values: '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw cagci::ConfigError("--values: no values given");
    return out;
}

void print_summary(const cagci::RunReport& r) {
    std::printf("%-14s %14s %14s\n", "tracker", "time_avg_ospa", "mean_card");
    for (const auto& t : r.trackers) {
        double card = 0.0;
        for (double c : t.cardinality) card += c;
        card /= static_cast<double>(std::max<std::size_t>(1, t.cardinality.size()));
        std::printf("%-14s %14.4f %14.4f\n", t.name.c_str(), t.time_avg_ospa, card);
    }
    double seconds = 0.0;
    for (double s : r.run_seconds) seconds += s;
    std::printf("%zu run(s), %.2f s total\n", r.run_seconds.size(), seconds);
}

struct Overrides {
    std::string config;
    int runs = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string modes;
};

cagci::ExperimentConfig build_config(CLI::App* cmd, const Overrides& o) {
    auto cfg = cagci::load_config(o.config);
    if (cmd->count("--runs")) cfg.runs = o.runs;
    if (cmd->count("--seed")) cfg.scenario.seed = o.seed;
    if (cmd->count("--out")) cfg.output_dir = o.out;
    if (cmd->count("--modes")) {
        std::istringstream in("[experiment]\nmodes = " + o.modes + "\n");
        cfg.modes = cagci::parse_config(in).modes;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering-based GCI fusion of GM-PHD filters with limited fields of view"};
    app.footer("\n" + cagci::config_reference());
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Monte Carlo experiment; writes ospa.csv, cardinality.csv, summary.csv");
    run->add_option("--config", run_opts.config, "Config file")->required();
    run->add_option("--runs", run_opts.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_opts.seed, "Master seed");
    run->add_option("--out", run_opts.out, "Output directory");
    run->add_option("--modes", run_opts.modes, "Comma list of none|standard_gci|ca_gci");

    Overrides sweep_opts;
    std::string param;
    std::string values;
    auto* sw = app.add_subcommand("sweep", "Time-averaged OSPA over a p_D or clutter-rate sweep");
    sw->add_option("--config", sweep_opts.config, "Config file")->required();
    sw->add_option("--param", param, "pd or clutter")->required()->check(CLI::IsMember({"pd", "clutter"}));
    sw->add_option("--values", values, "Comma-separated values")->required();
    sw->add_option("--runs", sweep_opts.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
    sw->add_option("--seed", sweep_opts.seed, "Master seed");
    sw->add_option("--out", sweep_opts.out, "Output directory");
    sw->add_option("--modes", sweep_opts.modes, "Comma list of none|standard_gci|ca_gci");

    int cases = 100;
    std::uint64_t bound_seed = 1;
    auto* vb = app.add_subcommand("verify-bound", "Check the fusion error bound on random 1-D configurations");
    vb->add_option("--cases", cases, "Random configurations")->check(CLI::PositiveNumber);
    vb->add_option("--seed", bound_seed, "Seed");

    std::string scenario_name;
    auto* sc = app.add_subcommand("scenario", "Print a built-in scenario in config format");
    sc->add_option("name", scenario_name, "table2")->required()->check(CLI::IsMember({"table2"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto report = cagci::run_experiment(build_config(run, run_opts));
            print_summary(report);
        } else if (*sw) {
            const auto cfg = build_config(sw, sweep_opts);
            const auto report = cagci::sweep(cfg, cagci::parse_sweep_parameter(param), parse_values(values));
            for (std::size_t i = 0; i < report.values.size(); ++i) {
                std::printf("%s = %g\n", param.c_str(), report.values[i]);
                print_summary(report.reports[i]);
            }
        } else if (*vb) {
            const auto report = cagci::verify_bound(cases, bound_seed);
            double worst = 0.0;
            for (const auto& c : report.cases) {
                if (c.bound > 0.0) worst = std::max(worst, c.discrepancy / c.bound);
            }
            std::printf("cases %zu, holds-rate %.4f, max discrepancy/bound %.6f\n", report.cases.size(),
                        report.holds_rate, worst);
            std::printf("%10s %14s %14s %14s\n", "separation", "discrepancy", "bound", "delta");
            for (const auto& p : report.separation_sweep) {
                std::printf("%10g %14.6e %14.6e %14.6e\n", p.separation, p.report.discrepancy, p.report.bound,
                            p.report.delta);
            }
            return report.holds_rate == 1.0 ? 0 : kExitNumerical;
        } else if (*sc) {
            std::cout << "[scenario]\npreset = empty\n"
                      << cagci::scenario_to_config(cagci::table2_scenario()).substr(std::string("[scenario]\n").size());
        }
    } catch (const cagci::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cagci::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cagci::ContractViolation& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cagci::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
