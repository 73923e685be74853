#include "cagci/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace cagci {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream tag reserved for truth process noise; sensor streams use their
// index.
constexpr std::uint64_t kTruthStream = 0xffffffffULL;

}  // namespace

Sector SensorSpec::sector() const {
    Sector s;
    s.origin = position;
    s.lo_deg = fov_lo_deg;
    s.hi_deg = fov_hi_deg;
    s.boresight_deg = boresight_deg;
    return s;
}

FieldOfView SensorSpec::fov(const Rect& area) const { return FieldOfView(sector(), area); }

void Scenario::validate() const {
    if (!(area.x_max > area.x_min) || !(area.y_max > area.y_min)) {
        throw ContractViolation("scenario: surveillance area is degenerate");
    }
    if (steps < 1) throw ContractViolation("scenario: steps must be >= 1");
    if (!(ts > 0.0)) throw ContractViolation("scenario: ts must be positive");
    if (!(survival_prob >= 0.0 && survival_prob <= 1.0)) {
        throw ContractViolation("scenario: survival_prob must lie in [0, 1]");
    }
    for (const auto& t : targets) {
        if (!(t.birth_time < t.death_time)) throw ContractViolation("scenario: target birth must precede death");
    }
    for (const auto& s : sensors) {
        if (!(s.detect_prob >= 0.0 && s.detect_prob <= 1.0)) {
            throw ContractViolation("scenario: sensor detect_prob must lie in [0, 1]");
        }
        if (!(s.noise_std > 0.0)) throw ContractViolation("scenario: sensor noise std must be positive");
        if (!(s.clutter_rate >= 0.0)) throw ContractViolation("scenario: clutter rate must be nonnegative");
        if (!(s.fov_lo_deg < s.fov_hi_deg)) throw ContractViolation("scenario: sensor FoV needs lo < hi");
    }
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream, std::uint64_t step) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ run);
    h = splitmix64(h ^ stream);
    return splitmix64(h ^ step);
}

Truth generate_truth(const Scenario& s, bool noisy, std::uint64_t run) {
    Truth truth(static_cast<std::size_t>(s.steps));
    const auto motion = MotionModel::constant_velocity(s.ts, s.process_noise_std, 1.0);
    Eigen::LLT<Eigen::MatrixXd> q_llt(motion.process_noise);
    const Eigen::MatrixXd q_l = q_llt.matrixL();

    for (std::size_t id = 0; id < s.targets.size(); ++id) {
        const auto& t = s.targets[id];
        std::mt19937_64 rng(stream_seed(s.seed, run, kTruthStream, id));
        std::normal_distribution<double> gauss(0.0, 1.0);
        bool started = false;
        Eigen::Vector4d x;
        for (int k = 0; k < s.steps; ++k) {
            const double tk = s.time_of(k);
            if (tk < t.birth_time || tk >= t.death_time) continue;
            const double age = tk - t.birth_time;
            if (!noisy) {
                x << t.position.x() + t.velocity.x() * age, t.velocity.x(), t.position.y() + t.velocity.y() * age,
                    t.velocity.y();
            } else if (!started) {
                x << t.position.x() + t.velocity.x() * age, t.velocity.x(), t.position.y() + t.velocity.y() * age,
                    t.velocity.y();
            } else {
                Eigen::Vector4d w;
                for (int i = 0; i < 4; ++i) w(i) = gauss(rng);
                x = motion.transition * x + q_l * w;
            }
            started = true;
            truth[static_cast<std::size_t>(k)].push_back({id, x});
        }
    }
    return truth;
}

bool in_fov(const SensorSpec& sensor, const Eigen::Vector2d& position) {
    return sensor.sector().contains(position);
}

MeasurementSet generate_measurements(const TruthStep& truth, const SensorSpec& sensor, const Rect& area,
                                     std::mt19937_64& rng) {
    const FieldOfView fov = sensor.fov(area);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, sensor.noise_std);
    MeasurementSet z;
    for (const auto& entry : truth) {
        const Eigen::Vector2d pos(entry.state(0), entry.state(2));
        if (!fov.contains(pos)) continue;
        if (unit(rng) >= sensor.detect_prob) continue;
        Measurement m(2);
        m << pos.x() + noise(rng), pos.y() + noise(rng);
        z.push_back(std::move(m));
    }
    std::poisson_distribution<int> clutter_count(sensor.clutter_rate);
    const int n_clutter = sensor.clutter_rate > 0.0 ? clutter_count(rng) : 0;
    for (int i = 0; i < n_clutter; ++i) {
        Measurement m(2);
        m << area.x_min + unit(rng) * (area.x_max - area.x_min), area.y_min + unit(rng) * (area.y_max - area.y_min);
        z.push_back(std::move(m));
    }
    std::shuffle(z.begin(), z.end(), rng);
    return z;
}

Scenario table2_scenario() {
    Scenario s;
    auto target = [](double x, double y, double vx, double vy, double birth, double death) {
        return TargetSpec{Eigen::Vector2d(x, y), Eigen::Vector2d(vx, vy), birth, death};
    };
    s.targets = {
        target(1000, 400, -14, 0, 1, 80),   target(1250, 400, -4, -2.5, 1, 80), target(500, 100, -8, 10, 10, 60),
        target(0, 600, 0, -4, 10, 80),      target(1000, 200, -9, 9, 10, 70),   target(1250, 505, -14, -7, 20, 60),
        target(1000, 600, -12, -7, 20, 60), target(250, 200, 8, 10, 20, 70),    target(1250, 300, -16, 0, 30, 70),
        target(-150, 500, 32, 0, 30, 70),   target(400, 600, 12, 3, 40, 80),
    };
    SensorSpec s1;
    s1.position = Eigen::Vector2d(400, 0);
    SensorSpec s2 = s1;
    s2.position = Eigen::Vector2d(800, 0);
    s.sensors = {s1, s2};
    return s;
}

Scenario example1_scenario() {
    Scenario s;
    s.targets = {
        TargetSpec{Eigen::Vector2d(200, 150), Eigen::Vector2d(3, 0), 1, 81},
        TargetSpec{Eigen::Vector2d(1000, 150), Eigen::Vector2d(-3, 0), 1, 81},
    };
    SensorSpec s1;
    s1.position = Eigen::Vector2d(400, 0);
    s1.detect_prob = 0.98;
    SensorSpec s2 = s1;
    s2.position = Eigen::Vector2d(800, 0);
    s.sensors = {s1, s2};
    return s;
}

Scenario single_target_scenario() {
    Scenario s;
    s.targets = {TargetSpec{Eigen::Vector2d(300, 300), Eigen::Vector2d(5, 4), 1, 81}};
    SensorSpec s1;
    s1.position = Eigen::Vector2d(400, 0);
    s1.detect_prob = 1.0;
    s1.clutter_rate = 0.0;
    s.sensors = {s1};
    return s;
}

}  // namespace cagci
