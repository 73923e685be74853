#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cagci {

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, out-of-range weight exponent, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization fails (covariance not positive-definite).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One weighted Gaussian term of an intensity function.
struct GaussianComponent {
    double weight = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    Eigen::Index dim() const { return mean.size(); }
};

/// Intensity function as a finite sum of weighted Gaussians. The empty
/// mixture is the zero intensity.
struct GaussianMixture {
    std::vector<GaussianComponent> components;

    GaussianMixture() = default;
    explicit GaussianMixture(std::vector<GaussianComponent> comps) : components(std::move(comps)) {}

    std::size_t size() const { return components.size(); }
    bool empty() const { return components.empty(); }
    void push_back(GaussianComponent c) { components.push_back(std::move(c)); }

    const GaussianComponent& operator[](std::size_t i) const { return components[i]; }
    GaussianComponent& operator[](std::size_t i) { return components[i]; }

    auto begin() const { return components.begin(); }
    auto end() const { return components.end(); }
    auto begin() { return components.begin(); }
    auto end() { return components.end(); }

    /// Appends every component of `other`.
    void append(const GaussianMixture& other);

    /// Mixture formed by the components at `indices`, in that order.
    GaussianMixture subset(const std::vector<std::size_t>& indices) const;
};

/// (M + M^T) / 2
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

/// log |M| of a symmetric positive-definite matrix; throws NumericalError
/// when the Cholesky factorization fails.
double spd_log_det(const Eigen::MatrixXd& m);

/// Inverse of a symmetric positive-definite matrix via Cholesky.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m);

/// log N(x; mean, cov).
double log_gaussian_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                            const Eigen::MatrixXd& cov);

/// Checks weight >= 0, matching dimensions and a symmetric covariance.
void validate(const GaussianComponent& c);

/// (x1 - x2)^T (P1^-1 + P2^-1) (x1 - x2). Symmetric in its arguments.
double corrected_mahalanobis(const GaussianComponent& a, const GaussianComponent& b);

/// log of the power-normalization factor
///   kappa(w, P) = sqrt(|2 pi P / w| / |2 pi P|^w),
/// evaluated through log-determinants.
double log_power_kappa(double omega, const Eigen::MatrixXd& cov);

/// [alpha N(x; m, P)]^w written as a single weighted Gaussian:
/// same mean, covariance P / w, weight alpha^w kappa(w, P).
/// w = 1 returns the component unchanged.
GaussianComponent component_power(const GaussianComponent& c, double omega);

/// Componentwise power of a mixture (well-separated approximation).
GaussianMixture mixture_power(const GaussianMixture& v, double omega);

/// Product of two (already exponentiated) Gaussian terms:
///   P = (Pa^-1 + Pb^-1)^-1, m = P (Pa^-1 ma + Pb^-1 mb),
///   alpha = alpha_a alpha_b N(ma - mb; 0, Pa + Pb).
GaussianComponent pairwise_fuse(const GaussianComponent& a, const GaussianComponent& b);

/// Integral of the intensity (expected number of targets).
double mixture_mass(const GaussianMixture& v);

/// Pointwise intensity value.
double mixture_eval(const GaussianMixture& v, const Eigen::VectorXd& x);

}  // namespace cagci
