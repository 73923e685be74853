#include "cagci/fov.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace cagci {

namespace {

constexpr double kAngleTol = 1e-9;

double radical_inverse(unsigned index, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * (index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

// Standard-normal Halton points (bases 2 and 3), one per column.
std::shared_ptr<const Eigen::Matrix2Xd> normal_points(int samples) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const Eigen::Matrix2Xd>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(samples);
    if (it != cache.end()) return it->second;
    auto pts = std::make_shared<Eigen::Matrix2Xd>(2, samples);
    for (int i = 0; i < samples; ++i) {
        const auto idx = static_cast<unsigned>(i + 1);
        for (int d = 0; d < 2; ++d) {
            const double u = radical_inverse(idx, d == 0 ? 2u : 3u);
            (*pts)(d, i) = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
        }
    }
    cache.emplace(samples, pts);
    return pts;
}

}  // namespace

bool Sector::contains(const Eigen::Vector2d& p) const {
    const Eigen::Vector2d d = p - origin;
    if (d.squaredNorm() == 0.0) return true;
    if (max_range && d.norm() > *max_range) return false;
    double rel = std::atan2(d.x(), d.y()) * 180.0 / std::numbers::pi - boresight_deg;
    while (rel > 180.0) rel -= 360.0;
    while (rel <= -180.0) rel += 360.0;
    return rel >= lo_deg - kAngleTol && rel <= hi_deg + kAngleTol;
}

FieldOfView::FieldOfView(Sector sector, std::optional<Rect> clip)
    : sectors_{std::move(sector)}, clip_(clip) {
    if (!(sectors_.front().lo_deg < sectors_.front().hi_deg)) {
        throw ContractViolation("field of view: sector bounds must satisfy lo < hi");
    }
}

FieldOfView FieldOfView::upward(const Eigen::Vector2d& origin, double half_width_deg,
                                std::optional<Rect> clip) {
    Sector s;
    s.origin = origin;
    s.lo_deg = -half_width_deg;
    s.hi_deg = half_width_deg;
    return FieldOfView(s, clip);
}

bool FieldOfView::contains(const Eigen::Vector2d& p) const {
    if (clip_ && !clip_->contains(p)) return false;
    for (const auto& s : sectors_) {
        if (s.contains(p)) return true;
    }
    return false;
}

FieldOfView FieldOfView::united(const FieldOfView& other) const {
    FieldOfView out = *this;
    out.sectors_.insert(out.sectors_.end(), other.sectors_.begin(), other.sectors_.end());
    if (!out.clip_) out.clip_ = other.clip_;
    return out;
}

Eigen::MatrixXd position_projection(Eigen::Index dim) {
    if (dim == 1 || dim == 2) return Eigen::MatrixXd::Identity(dim, dim);
    if (dim == 4) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 4);
        h(0, 0) = 1.0;
        h(1, 2) = 1.0;
        return h;
    }
    throw ContractViolation("no default position projection for state dimension " +
                            std::to_string(dim));
}

double fov_mass(const GaussianMixture& dif, const FieldOfView& fov, int samples) {
    if (dif.empty()) return 0.0;
    return fov_mass(dif, fov, samples, position_projection(dif[0].dim()));
}

double fov_mass(const GaussianMixture& dif, const FieldOfView& fov, int samples,
                const Eigen::MatrixXd& position_matrix) {
    if (samples < 1) throw ContractViolation("fov_mass: sample count must be positive");
    const auto pts = normal_points(samples);
    double total = 0.0;
    for (const auto& c : dif) {
        if (c.weight == 0.0) continue;
        const Eigen::Vector2d m = position_matrix * c.mean;
        const Eigen::Matrix2d p = position_matrix * c.cov * position_matrix.transpose();
        Eigen::LLT<Eigen::Matrix2d> llt(0.5 * (p + p.transpose()));
        if (llt.info() != Eigen::Success) throw NumericalError("fov_mass: singular positional covariance");
        const Eigen::Matrix2d l = llt.matrixL();
        int inside = 0;
        for (int i = 0; i < samples; ++i) {
            if (fov.contains(m + l * pts->col(i))) ++inside;
        }
        total += c.weight * static_cast<double>(inside) / samples;
    }
    return total;
}

}  // namespace cagci
