#include "cagci/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cagci {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void fail(const Entry& e, const std::string& why) {
    throw ConfigError("line " + std::to_string(e.line) + ": [" + e.section + "] " + e.key + ": " + why);
}

double as_double(const Entry& e, const std::string& text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) fail(e, "expected a number, got '" + text + "'");
    return v;
}

double as_double(const Entry& e) { return as_double(e, e.value); }

long long as_int(const Entry& e) {
    long long v = 0;
    const auto* last = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
    if (e.value.empty() || ec != std::errc() || ptr != last) fail(e, "expected an integer, got '" + e.value + "'");
    return v;
}

bool as_bool(const Entry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(e, "expected a boolean, got '" + e.value + "'");
}

std::vector<double> as_list(const Entry& e, std::size_t min_n, std::size_t max_n) {
    std::vector<double> out;
    for (const auto& item : split(e.value, ',')) out.push_back(as_double(e, item));
    if (out.size() < min_n || out.size() > max_n) {
        fail(e, "expected " + std::to_string(min_n) + (min_n == max_n ? "" : "-" + std::to_string(max_n)) +
                    " comma-separated numbers");
    }
    return out;
}

Scenario preset(const Entry& e) {
    if (e.value == "table2") return table2_scenario();
    if (e.value == "example1") return example1_scenario();
    if (e.value == "single_target") return single_target_scenario();
    if (e.value == "empty") {
        Scenario s;
        s.sensors = table2_scenario().sensors;
        return s;
    }
    fail(e, "unknown preset '" + e.value + "' (table2, example1, single_target, empty)");
}

using Setter = std::function<void(ExperimentConfig&, const Entry&)>;

struct SensorOverrides {
    std::optional<double> detect_prob;
    std::optional<double> clutter_rate;
    std::optional<double> noise_std;
    std::optional<double> half_width;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    std::vector<Entry> entries;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find_first_of("#;");
        std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> known{"experiment", "scenario", "filter", "fusion", "ospa"};
            if (!known.count(section)) {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        Entry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (e.section.empty()) fail(e, "key outside of any section");
        entries.push_back(std::move(e));
    }

    ExperimentConfig cfg;
    for (const auto& e : entries) {
        if (e.section == "scenario" && e.key == "preset") cfg.scenario = preset(e);
    }

    SensorOverrides overrides;
    bool targets_replaced = false;
    bool sensors_replaced = false;
    std::optional<std::uint64_t> seed;

    const std::map<std::string, std::map<std::string, Setter>> setters = {
        {"experiment",
         {
             {"runs", [](auto& c, const auto& e) { c.runs = static_cast<int>(as_int(e)); }},
             {"seed", [&](auto&, const auto& e) { seed = static_cast<std::uint64_t>(as_int(e)); }},
             {"output", [](auto& c, const auto& e) { c.output_dir = e.value; }},
             {"feedback", [](auto& c, const auto& e) { c.feedback = as_bool(e); }},
             {"workers", [](auto& c, const auto& e) { c.workers = static_cast<int>(as_int(e)); }},
             {"extraction_threshold", [](auto& c, const auto& e) { c.extraction_threshold = as_double(e); }},
             {"modes",
              [](auto& c, const auto& e) {
                  c.modes.clear();
                  for (const auto& m : split(e.value, ',')) {
                      if (m == "none") continue;
                      if (m == "standard_gci") {
                          c.modes.push_back(FusionMode::standard_gci);
                      } else if (m == "ca_gci") {
                          c.modes.push_back(FusionMode::ca_gci);
                      } else {
                          fail(e, "unknown fusion mode '" + m + "' (none, standard_gci, ca_gci)");
                      }
                  }
              }},
         }},
        {"scenario",
         {
             {"preset", [](auto&, const auto&) {}},
             {"steps", [](auto& c, const auto& e) { c.scenario.steps = static_cast<int>(as_int(e)); }},
             {"ts", [](auto& c, const auto& e) { c.scenario.ts = as_double(e); }},
             {"sigma_w", [](auto& c, const auto& e) { c.scenario.process_noise_std = as_double(e); }},
             {"survival_prob", [](auto& c, const auto& e) { c.scenario.survival_prob = as_double(e); }},
             {"noisy_truth", [](auto& c, const auto& e) { c.scenario.noisy_truth = as_bool(e); }},
             {"area",
              [](auto& c, const auto& e) {
                  const auto v = as_list(e, 4, 4);
                  c.scenario.area = Rect{v[0], v[1], v[2], v[3]};
              }},
             {"detect_prob", [&](auto&, const auto& e) { overrides.detect_prob = as_double(e); }},
             {"clutter_rate", [&](auto&, const auto& e) { overrides.clutter_rate = as_double(e); }},
             {"sigma_eps", [&](auto&, const auto& e) { overrides.noise_std = as_double(e); }},
             {"fov_half_width", [&](auto&, const auto& e) { overrides.half_width = as_double(e); }},
             {"target",
              [&](auto& c, const auto& e) {
                  if (!targets_replaced) c.scenario.targets.clear();
                  targets_replaced = true;
                  const auto v = as_list(e, 6, 6);
                  c.scenario.targets.push_back(
                      TargetSpec{Eigen::Vector2d(v[0], v[1]), Eigen::Vector2d(v[2], v[3]), v[4], v[5]});
              }},
             {"sensor",
              [&](auto& c, const auto& e) {
                  if (!sensors_replaced) c.scenario.sensors.clear();
                  sensors_replaced = true;
                  const auto v = as_list(e, 2, 3);
                  SensorSpec s;
                  s.position = Eigen::Vector2d(v[0], v[1]);
                  if (v.size() == 3) s.boresight_deg = v[2];
                  c.scenario.sensors.push_back(s);
              }},
         }},
        {"filter",
         {
             {"prune_threshold", [](auto& c, const auto& e) { c.housekeeping.prune_threshold = as_double(e); }},
             {"merge_threshold", [](auto& c, const auto& e) { c.housekeeping.merge_threshold = as_double(e); }},
             {"max_components",
              [](auto& c, const auto& e) {
                  const auto n = as_int(e);
                  if (n < 1) fail(e, "must be >= 1");
                  c.housekeeping.max_components = static_cast<std::size_t>(n);
              }},
             {"birth_mass", [](auto& c, const auto& e) { c.birth.total_mass = as_double(e); }},
             {"birth_velocity_std", [](auto& c, const auto& e) { c.birth.velocity_std = as_double(e); }},
             {"birth_position_inflation",
              [](auto& c, const auto& e) { c.birth.position_inflation = as_double(e); }},
             {"area_margin", [](auto& c, const auto& e) { c.housekeeping.area_margin = as_double(e); }},
             {"pd_samples", [](auto& c, const auto& e) { c.pd_samples = static_cast<int>(as_int(e)); }},
         }},
        {"fusion",
         {
             {"omega1", [](auto& c, const auto& e) { c.fusion.omega1 = as_double(e); }},
             {"omega2", [](auto& c, const auto& e) { c.fusion.omega2 = as_double(e); }},
             {"omega_bar1", [](auto& c, const auto& e) { c.fusion.omega_bar1 = as_double(e); }},
             {"omega_bar2", [](auto& c, const auto& e) { c.fusion.omega_bar2 = as_double(e); }},
             {"delta", [](auto& c, const auto& e) { c.fusion.delta = as_double(e); }},
             {"gamma", [](auto& c, const auto& e) { c.fusion.gamma = as_double(e); }},
             {"t_alpha", [](auto& c, const auto& e) { c.fusion.t_alpha = as_double(e); }},
             {"t_d", [](auto& c, const auto& e) { c.fusion.t_d = as_double(e); }},
             {"t_r", [](auto& c, const auto& e) { c.fusion.t_r = as_double(e); }},
             {"fov_samples",
              [](auto& c, const auto& e) { c.fusion.fov_samples = static_cast<int>(as_int(e)); }},
         }},
        {"ospa",
         {
             {"c", [](auto& c, const auto& e) { c.ospa_c = c.fusion.ospa_c = as_double(e); }},
             {"p", [](auto& c, const auto& e) { c.ospa_p = c.fusion.ospa_p = as_double(e); }},
         }},
    };

    for (const auto& e : entries) {
        const auto sec = setters.find(e.section);
        if (sec == setters.end()) fail(e, "unknown section");
        const auto key = sec->second.find(e.key);
        if (key == sec->second.end()) fail(e, "unknown key");
        key->second(cfg, e);
    }

    if (seed) cfg.scenario.seed = *seed;
    for (auto& s : cfg.scenario.sensors) {
        if (overrides.detect_prob) s.detect_prob = *overrides.detect_prob;
        if (overrides.clutter_rate) s.clutter_rate = *overrides.clutter_rate;
        if (overrides.noise_std) s.noise_std = *overrides.noise_std;
        if (overrides.half_width) {
            s.fov_lo_deg = -*overrides.half_width;
            s.fov_hi_deg = *overrides.half_width;
        }
    }
    try {
        cfg.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    return parse_config(in);
}

std::string scenario_to_config(const Scenario& s) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "[scenario]\n";
    out << "steps = " << s.steps << '\n';
    out << "ts = " << s.ts << '\n';
    out << "sigma_w = " << s.process_noise_std << '\n';
    out << "survival_prob = " << s.survival_prob << '\n';
    out << "noisy_truth = " << (s.noisy_truth ? "true" : "false") << '\n';
    out << "area = " << s.area.x_min << ", " << s.area.x_max << ", " << s.area.y_min << ", " << s.area.y_max << '\n';
    if (!s.sensors.empty()) {
        // Per-sensor detection, clutter and noise settings are shared.
        const auto& s0 = s.sensors.front();
        out << "detect_prob = " << s0.detect_prob << '\n';
        out << "clutter_rate = " << s0.clutter_rate << '\n';
        out << "sigma_eps = " << s0.noise_std << '\n';
        out << "fov_half_width = " << s0.fov_hi_deg << '\n';
    }
    for (const auto& t : s.targets) {
        out << "target = " << t.position.x() << ", " << t.position.y() << ", " << t.velocity.x() << ", "
            << t.velocity.y() << ", " << t.birth_time << ", " << t.death_time << '\n';
    }
    for (const auto& sensor : s.sensors) {
        out << "sensor = " << sensor.position.x() << ", " << sensor.position.y() << ", " << sensor.boresight_deg
            << '\n';
    }
    out << "\n[experiment]\nseed = " << s.seed << '\n';
    return out.str();
}

std::string config_reference() {
    const ExperimentConfig d;
    const Scenario t2 = table2_scenario();
    std::ostringstream out;
    out << "Config file: [section] headers and `key = value` lines; # or ; start comments.\n"
        << "Unknown sections and keys are errors.\n\n"
        << "[experiment]\n"
        << "  runs = " << d.runs << "\n"
        << "  seed = " << d.scenario.seed << "\n"
        << "  output = (none)            directory for ospa.csv, cardinality.csv, summary.csv\n"
        << "  modes = standard_gci,ca_gci  comma list of none|standard_gci|ca_gci\n"
        << "  feedback = false           fused PHD fed back to both local filters (two sensors only)\n"
        << "  workers = " << d.workers << "\n"
        << "  extraction_threshold = " << d.extraction_threshold << "\n"
        << "[scenario]\n"
        << "  preset = table2            table2|example1|single_target|empty (applied first)\n"
        << "  steps = " << t2.steps << "\n"
        << "  ts = " << t2.ts << "\n"
        << "  sigma_w = " << t2.process_noise_std << "\n"
        << "  survival_prob = " << t2.survival_prob << "\n"
        << "  noisy_truth = false\n"
        << "  area = 0, 1500, 0, 1000    x_min, x_max, y_min, y_max\n"
        << "  detect_prob = " << t2.sensors[0].detect_prob << "  (all sensors)\n"
        << "  clutter_rate = " << t2.sensors[0].clutter_rate << "  (all sensors)\n"
        << "  sigma_eps = " << t2.sensors[0].noise_std << "  (all sensors)\n"
        << "  fov_half_width = " << t2.sensors[0].fov_hi_deg << "\n"
        << "  target = x, y, vx, vy, birth, death   repeatable; replaces the preset targets\n"
        << "  sensor = x, y[, boresight_deg]         repeatable; replaces the preset sensors\n"
        << "[filter]\n"
        << "  prune_threshold = " << d.housekeeping.prune_threshold << "\n"
        << "  merge_threshold = " << d.housekeeping.merge_threshold << "\n"
        << "  max_components = " << d.housekeeping.max_components << "\n"
        << "  birth_mass = " << d.birth.total_mass << "\n"
        << "  birth_velocity_std = " << d.birth.velocity_std << "\n"
        << "  birth_position_inflation = " << d.birth.position_inflation << "\n"
        << "  area_margin = " << d.housekeeping.area_margin << "  (negative disables)\n"
        << "  pd_samples = " << d.pd_samples << "  (0: p_D at the component mean)\n"
        << "[fusion]\n"
        << "  omega1 = " << d.fusion.omega1 << "\n"
        << "  omega2 = " << d.fusion.omega2 << "\n"
        << "  omega_bar1 = " << d.fusion.omega_bar1 << "\n"
        << "  omega_bar2 = " << d.fusion.omega_bar2 << "\n"
        << "  delta = " << d.fusion.delta << "\n"
        << "  gamma = " << d.fusion.gamma << "\n"
        << "  t_alpha = " << d.fusion.t_alpha << "\n"
        << "  t_d = " << d.fusion.t_d << "\n"
        << "  t_r = " << d.fusion.t_r << "\n"
        << "  fov_samples = " << d.fusion.fov_samples << "\n"
        << "[ospa]\n"
        << "  c = " << d.ospa_c << "\n"
        << "  p = " << d.ospa_p << "\n";
    return out.str();
}

}  // namespace cagci
