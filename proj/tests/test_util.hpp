#pragma once

#include "cagci/gaussian.hpp"

#include <Eigen/Dense>

#include <random>

namespace cagci::testing {

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = n(rng);
    return scale * (a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d));
}

inline Eigen::VectorXd random_vec(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
    return v;
}

inline GaussianComponent random_component(std::mt19937_64& rng, Eigen::Index d) {
    std::uniform_real_distribution<double> w(0.05, 2.0);
    return {w(rng), random_vec(rng, d, 5.0), random_spd(rng, d)};
}

inline GaussianComponent gc(double w, std::initializer_list<double> mean, const Eigen::MatrixXd& cov) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(mean.size()));
    Eigen::Index i = 0;
    for (double x : mean) m(i++) = x;
    return {w, m, cov};
}

/// [px, vx, py, vy] component at position (x, y) with isotropic covariance.
inline GaussianComponent track(double w, double x, double y, double var = 4.0) {
    Eigen::VectorXd m(4);
    m << x, 0.0, y, 0.0;
    return {w, m, var * Eigen::MatrixXd::Identity(4, 4)};
}

}  // namespace cagci::testing
