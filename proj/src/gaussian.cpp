#include "cagci/gaussian.hpp"

#include <cmath>

namespace cagci {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + ": matrix is not positive-definite");
    }
    return llt;
}

void require_same_dim(const GaussianComponent& a, const GaussianComponent& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw ContractViolation(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

void GaussianMixture::append(const GaussianMixture& other) {
    components.insert(components.end(), other.components.begin(), other.components.end());
}

GaussianMixture GaussianMixture::subset(const std::vector<std::size_t>& indices) const {
    GaussianMixture out;
    out.components.reserve(indices.size());
    for (auto i : indices) out.components.push_back(components.at(i));
    return out;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double spd_log_det(const Eigen::MatrixXd& m) {
    auto llt = factor(m, "log-determinant");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m) {
    auto llt = factor(m, "inverse");
    return symmetrized(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
}

double log_gaussian_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                            const Eigen::MatrixXd& cov) {
    if (x.size() != mean.size() || cov.rows() != mean.size()) {
        throw ContractViolation("gaussian density: dimension mismatch");
    }
    auto llt = factor(cov, "gaussian density");
    const Eigen::VectorXd r = llt.matrixL().solve(x - mean);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det + r.squaredNorm());
}

void validate(const GaussianComponent& c) {
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
        throw ContractViolation("component weight must be finite and nonnegative");
    }
    if (c.cov.rows() != c.mean.size() || c.cov.cols() != c.mean.size()) {
        throw ContractViolation("mean and covariance dimensions disagree");
    }
    const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
    if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw ContractViolation("covariance is not symmetric");
    }
    factor(c.cov, "component covariance");
}

double corrected_mahalanobis(const GaussianComponent& a, const GaussianComponent& b) {
    require_same_dim(a, b, "corrected_mahalanobis");
    const Eigen::VectorXd d = a.mean - b.mean;
    auto la = factor(a.cov, "corrected_mahalanobis");
    auto lb = factor(b.cov, "corrected_mahalanobis");
    const double qa = la.matrixL().solve(d).squaredNorm();
    const double qb = lb.matrixL().solve(d).squaredNorm();
    return qa + qb;
}

double log_power_kappa(double omega, const Eigen::MatrixXd& cov) {
    if (!(omega > 0.0)) throw ContractViolation("power exponent must be positive");
    const double d = static_cast<double>(cov.rows());
    const double log_det_2pi_p = d * kLog2Pi + spd_log_det(cov);
    // |2 pi P / w| = |2 pi P| w^-d
    return 0.5 * ((log_det_2pi_p - d * std::log(omega)) - omega * log_det_2pi_p);
}

GaussianComponent component_power(const GaussianComponent& c, double omega) {
    if (!(omega > 0.0) || omega > 1.0) {
        throw ContractViolation("component_power: exponent must lie in (0, 1]");
    }
    if (omega == 1.0) return c;
    GaussianComponent out;
    out.mean = c.mean;
    out.cov = c.cov / omega;
    const double log_kappa = log_power_kappa(omega, c.cov);
    out.weight = c.weight > 0.0 ? std::exp(omega * std::log(c.weight) + log_kappa) : 0.0;
    return out;
}

GaussianMixture mixture_power(const GaussianMixture& v, double omega) {
    GaussianMixture out;
    out.components.reserve(v.size());
    for (const auto& c : v) out.push_back(component_power(c, omega));
    return out;
}

GaussianComponent pairwise_fuse(const GaussianComponent& a, const GaussianComponent& b) {
    require_same_dim(a, b, "pairwise_fuse");
    const Eigen::MatrixXd info_a = spd_inverse(a.cov);
    const Eigen::MatrixXd info_b = spd_inverse(b.cov);
    GaussianComponent out;
    out.cov = spd_inverse(info_a + info_b);
    out.mean = out.cov * (info_a * a.mean + info_b * b.mean);
    const double log_n = log_gaussian_density(a.mean - b.mean, Eigen::VectorXd::Zero(a.dim()),
                                              a.cov + b.cov);
    out.weight = a.weight * b.weight * std::exp(log_n);
    return out;
}

double mixture_mass(const GaussianMixture& v) {
    double total = 0.0;
    for (const auto& c : v) total += c.weight;
    return total;
}

double mixture_eval(const GaussianMixture& v, const Eigen::VectorXd& x) {
    double total = 0.0;
    for (const auto& c : v) {
        if (c.dim() != x.size()) throw ContractViolation("mixture_eval: dimension mismatch");
        total += c.weight * std::exp(log_gaussian_density(x, c.mean, c.cov));
    }
    return total;
}

}  // namespace cagci
