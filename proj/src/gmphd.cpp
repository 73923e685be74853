#include "cagci/gmphd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cagci {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Quantities of the Kalman update that do not depend on the measurement.
struct UpdateCache {
    Eigen::VectorXd predicted_z;
    Eigen::MatrixXd innovation_l;  // lower Cholesky factor of S
    double log_norm = 0.0;         // -0.5 (d log 2pi + log|S|)
    Eigen::MatrixXd gain;
    Eigen::MatrixXd cov;
    double pd = 0.0;
};

}  // namespace

MotionModel MotionModel::constant_velocity(double ts, double sigma_w, double survival_prob) {
    MotionModel m;
    m.step = ts;
    m.survival_prob = survival_prob;
    m.transition = Eigen::MatrixXd::Identity(4, 4);
    m.transition(0, 1) = ts;
    m.transition(2, 3) = ts;
    Eigen::Matrix2d block;
    block << std::pow(ts, 4) / 4.0, std::pow(ts, 3) / 2.0, std::pow(ts, 3) / 2.0, ts * ts;
    m.process_noise = Eigen::MatrixXd::Zero(4, 4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            m.process_noise(2 * 0 + a, 2 * 0 + b) = block(a, b);
            m.process_noise(2 * 1 + a, 2 * 1 + b) = block(a, b);
        }
    }
    m.process_noise *= sigma_w * sigma_w;
    return m;
}

MeasurementModel MeasurementModel::position_sensor(double sigma, double detect_prob,
                                                   double clutter_rate, Rect area,
                                                   std::optional<FieldOfView> fov) {
    MeasurementModel m;
    m.observation = position_projection(4);
    m.noise = sigma * sigma * Eigen::MatrixXd::Identity(2, 2);
    m.detect_prob_in_fov = detect_prob;
    m.clutter_rate = clutter_rate;
    m.surveillance_area = area;
    m.fov = std::move(fov);
    return m;
}

double MeasurementModel::detect_prob(const Eigen::VectorXd& state) const {
    if (!fov) return detect_prob_in_fov;
    const Eigen::VectorXd p = observation * state;
    return fov->contains(Eigen::Vector2d(p(0), p(1))) ? detect_prob_in_fov : 0.0;
}

double MeasurementModel::detect_prob(const GaussianComponent& c) const {
    if (!fov || fov_samples <= 0) return detect_prob(c.mean);
    GaussianMixture one;
    one.push_back({1.0, c.mean, c.cov});
    return detect_prob_in_fov * std::clamp(fov_mass(one, *fov, fov_samples, observation), 0.0, 1.0);
}

double MeasurementModel::clutter_density() const {
    const double area = surveillance_area.area();
    if (clutter_rate == 0.0) return 0.0;
    if (!(area > 0.0)) throw ContractViolation("surveillance area must be positive");
    return clutter_rate / area;
}

GaussianMixture predict(const GaussianMixture& prev, const MotionModel& motion,
                        const GaussianMixture& birth) {
    const auto& f = motion.transition;
    GaussianMixture out;
    out.components.reserve(prev.size() + birth.size());
    for (const auto& c : prev) {
        if (c.dim() != f.cols()) throw ContractViolation("predict: state dimension mismatch");
        GaussianComponent p;
        p.weight = motion.survival_prob * c.weight;
        p.mean = f * c.mean;
        p.cov = symmetrized(f * c.cov * f.transpose() + motion.process_noise);
        out.push_back(std::move(p));
    }
    out.append(birth);
    return out;
}

GaussianMixture update(const GaussianMixture& predicted, const MeasurementSet& z,
                       const MeasurementModel& meas) {
    const auto& h = meas.observation;
    const auto& r = meas.noise;
    const Eigen::Index zdim = h.rows();
    for (const auto& zi : z) {
        if (zi.size() != zdim) throw ContractViolation("update: measurement dimension mismatch");
    }

    std::vector<UpdateCache> cache(predicted.size());
    GaussianMixture out;
    out.components.reserve(predicted.size() * (1 + z.size()));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto& c = predicted[i];
        if (c.dim() != h.cols()) throw ContractViolation("update: state dimension mismatch");
        auto& uc = cache[i];
        uc.pd = meas.detect_prob(c);
        out.push_back({(1.0 - uc.pd) * c.weight, c.mean, c.cov});
        if (uc.pd == 0.0 || z.empty()) continue;
        const Eigen::MatrixXd s = symmetrized(h * c.cov * h.transpose() + r);
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        if (llt.info() != Eigen::Success) throw NumericalError("update: innovation covariance not SPD");
        uc.predicted_z = h * c.mean;
        uc.innovation_l = llt.matrixL();
        uc.log_norm = -0.5 * (static_cast<double>(zdim) * kLog2Pi +
                              2.0 * uc.innovation_l.diagonal().array().log().sum());
        const Eigen::MatrixXd pht = c.cov * h.transpose();
        uc.gain = llt.solve(pht.transpose()).transpose();
        const Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(c.dim(), c.dim()) - uc.gain * h;
        // Joseph form keeps the covariance SPD.
        uc.cov = symmetrized(ikh * c.cov * ikh.transpose() + uc.gain * r * uc.gain.transpose());
    }

    const double kappa = meas.clutter_density();
    std::vector<double> q(predicted.size());
    for (const auto& zi : z) {
        double denom = kappa;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            const auto& uc = cache[i];
            if (uc.pd == 0.0) {
                q[i] = 0.0;
                continue;
            }
            const Eigen::VectorXd e = uc.innovation_l.triangularView<Eigen::Lower>().solve(zi - uc.predicted_z);
            q[i] = uc.pd * predicted[i].weight * std::exp(uc.log_norm - 0.5 * e.squaredNorm());
            denom += q[i];
        }
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            const auto& uc = cache[i];
            if (uc.pd == 0.0) continue;
            GaussianComponent u;
            u.weight = denom > 0.0 ? q[i] / denom : 0.0;
            u.mean = predicted[i].mean + uc.gain * (zi - uc.predicted_z);
            u.cov = uc.cov;
            out.push_back(std::move(u));
        }
    }
    return out;
}

GaussianMixture adaptive_birth(const MeasurementSet& z_prev, const BirthParams& params,
                               const MeasurementModel& meas) {
    const auto& h = meas.observation;
    std::vector<const Measurement*> used;
    for (const auto& z : z_prev) {
        if (meas.fov && !meas.fov->contains(Eigen::Vector2d(z(0), z(1)))) continue;
        used.push_back(&z);
    }
    GaussianMixture out;
    if (used.empty()) return out;
    const Eigen::Index n = h.cols();
    // h is a selection matrix: h^T maps measurement space into the
    // positional coordinates, (I - h^T h) selects the rest.
    const Eigen::MatrixXd ht = h.transpose();
    const Eigen::MatrixXd rest = Eigen::MatrixXd::Identity(n, n) - ht * h;
    const Eigen::MatrixXd cov = symmetrized(ht * (params.position_inflation * meas.noise) * h +
                                            params.velocity_std * params.velocity_std * rest);
    const double w = params.total_mass / static_cast<double>(used.size());
    for (const auto* z : used) out.push_back({w, ht * (*z), cov});
    return out;
}

GaussianMixture prune_merge(const GaussianMixture& v, const HousekeepingParams& hk) {
    if (hk.max_components < 1) throw ContractViolation("prune_merge: max_components must be >= 1");
    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].weight > hk.prune_threshold) alive.push_back(i);
    }

    struct Merged {
        std::size_t order;
        GaussianComponent comp;
    };
    std::vector<Merged> merged;
    std::vector<bool> used(v.size(), false);
    std::size_t remaining = alive.size();
    while (remaining > 0) {
        std::size_t best = v.size();
        for (auto i : alive) {
            if (!used[i] && (best == v.size() || v[i].weight > v[best].weight)) best = i;
        }
        const auto& dom = v[best];
        const Eigen::LLT<Eigen::MatrixXd> llt(dom.cov);
        if (llt.info() != Eigen::Success) throw NumericalError("prune_merge: covariance not SPD");

        std::vector<std::size_t> group;
        for (auto i : alive) {
            if (used[i]) continue;
            const Eigen::VectorXd d = v[i].mean - dom.mean;
            if (i == best || llt.matrixL().solve(d).squaredNorm() <= hk.merge_threshold) group.push_back(i);
        }
        GaussianComponent m;
        m.weight = 0.0;
        m.mean = Eigen::VectorXd::Zero(dom.dim());
        for (auto i : group) {
            m.weight += v[i].weight;
            m.mean += v[i].weight * v[i].mean;
        }
        m.mean /= m.weight;
        m.cov = Eigen::MatrixXd::Zero(dom.dim(), dom.dim());
        for (auto i : group) {
            const Eigen::VectorXd d = m.mean - v[i].mean;
            m.cov += v[i].weight * (v[i].cov + d * d.transpose());
        }
        m.cov = symmetrized(m.cov / m.weight);
        if (group.size() == 1) m = dom;
        for (auto i : group) used[i] = true;
        remaining -= group.size();
        merged.push_back({best, std::move(m)});
    }

    if (merged.size() > hk.max_components) {
        std::stable_sort(merged.begin(), merged.end(),
                         [](const Merged& a, const Merged& b) { return a.comp.weight > b.comp.weight; });
        merged.resize(hk.max_components);
    }
    std::sort(merged.begin(), merged.end(), [](const Merged& a, const Merged& b) { return a.order < b.order; });
    GaussianMixture out;
    out.components.reserve(merged.size());
    for (auto& m : merged) out.push_back(std::move(m.comp));
    return out;
}

std::vector<Eigen::VectorXd> extract_estimates(const GaussianMixture& v, double threshold) {
    if (!(threshold > 0.0)) throw ContractViolation("extract_estimates: threshold must be positive");
    std::vector<Eigen::VectorXd> out;
    for (const auto& c : v) {
        if (c.weight > threshold) out.push_back(c.mean);
    }
    return out;
}

std::size_t estimated_cardinality(const GaussianMixture& v) {
    return static_cast<std::size_t>(std::floor(mixture_mass(v) + 0.5));
}

GmPhdFilter::GmPhdFilter(MotionModel motion, MeasurementModel meas, HousekeepingParams hk,
                         BirthParams birth)
    : motion_(std::move(motion)), meas_(std::move(meas)), hk_(hk), birth_(birth) {}

void GmPhdFilter::step(const MeasurementSet& z) {
    const auto birth = adaptive_birth(previous_scan_, birth_, meas_);
    const auto predicted = predict(posterior_, motion_, birth);
    auto updated = update(predicted, z, meas_);
    if (hk_.area_margin >= 0.0 && meas_.surveillance_area.area() > 0.0) {
        const auto& a = meas_.surveillance_area;
        const double mg = hk_.area_margin;
        GaussianMixture kept;
        for (auto& c : updated) {
            const Eigen::VectorXd p = meas_.observation * c.mean;
            if (p(0) >= a.x_min - mg && p(0) <= a.x_max + mg && p(1) >= a.y_min - mg && p(1) <= a.y_max + mg) {
                kept.push_back(std::move(c));
            }
        }
        updated = std::move(kept);
    }
    posterior_ = prune_merge(updated, hk_);
    previous_scan_ = z;
}

}  // namespace cagci
