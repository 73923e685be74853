#pragma once

#include "cagci/gaussian.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace cagci {

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max] in meters.
struct Rect {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool contains(const Eigen::Vector2d& p) const {
        return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
    }
};

/// Angular sector anchored at a sensor position. Bearings are measured in
/// degrees from the boresight, positive clockwise (towards +x when the
/// boresight is +y).
struct Sector {
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    double lo_deg = -60.0;
    double hi_deg = 60.0;
    /// Bearing of the boresight measured from +y, clockwise.
    double boresight_deg = 0.0;
    std::optional<double> max_range;

    bool contains(const Eigen::Vector2d& p) const;
};

/// Spatial region a sensor (or a set of already fused sensors) can observe:
/// a union of sectors, optionally clipped to the surveillance area.
class FieldOfView {
public:
    FieldOfView() = default;
    explicit FieldOfView(Sector sector, std::optional<Rect> clip = std::nullopt);

    /// Sector of half-width `half_width_deg` pointing along +y from `origin`.
    static FieldOfView upward(const Eigen::Vector2d& origin, double half_width_deg,
                              std::optional<Rect> clip = std::nullopt);

    bool contains(const Eigen::Vector2d& p) const;

    /// Union of two regions; the clip rectangle of `*this` is kept.
    FieldOfView united(const FieldOfView& other) const;

    const std::vector<Sector>& sectors() const { return sectors_; }
    const std::optional<Rect>& clip() const { return clip_; }

private:
    std::vector<Sector> sectors_;
    std::optional<Rect> clip_;
};

/// Rows of the position extraction matrix H for a state of dimension `dim`:
/// identity for dims 1 and 2, [px, vx, py, vy] -> [px, py] for dim 4.
Eigen::MatrixXd position_projection(Eigen::Index dim);

inline constexpr int kDefaultFovSamples = 512;

/// Estimate of sum_i alpha_i * integral over the FoV of N(x; x_i, P_i),
/// using a fixed Halton point set pushed through each component's
/// positional Cholesky factor. Deterministic for a given sample count.
double fov_mass(const GaussianMixture& dif, const FieldOfView& fov, int samples = kDefaultFovSamples);

/// Same, with an explicit position extraction matrix.
double fov_mass(const GaussianMixture& dif, const FieldOfView& fov, int samples,
                const Eigen::MatrixXd& position_matrix);

}  // namespace cagci
