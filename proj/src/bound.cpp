#include "cagci/bound.hpp"

#include <algorithm>
#include <cmath>

namespace cagci {

namespace {

using Values = std::vector<double>;

double trapezoid_abs(const Values& f, double h) {
    if (f.empty()) return 0.0;
    double s = 0.0;
    for (double x : f) s += std::abs(x);
    s -= 0.5 * (std::abs(f.front()) + std::abs(f.back()));
    return h * s;
}

double sup_abs(const Values& f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

Values power(const Values& f, double w) {
    Values out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] > 0.0 ? std::pow(f[i], w) : 0.0;
    return out;
}

Values diff(const Values& a, const Values& b) {
    Values out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

}  // namespace

GridFunction1D GridFunction1D::sample(const GaussianMixture& v, const Grid1D& grid) {
    GridFunction1D f;
    f.grid = grid;
    f.values.resize(grid.size);
    Eigen::VectorXd x(1);
    for (std::size_t i = 0; i < grid.size; ++i) {
        x(0) = grid.at(i);
        f.values[i] = mixture_eval(v, x);
    }
    return f;
}

double l1_norm(const GridFunction1D& f) { return trapezoid_abs(f.values, f.grid.spacing); }
double sup_norm(const GridFunction1D& f) { return sup_abs(f.values); }

BoundReport bound_check(const BoundProblem& pb) {
    const std::size_t m1 = pb.difs1.size();
    const std::size_t m2 = pb.difs2.size();
    const std::size_t q = pb.matched;
    if (q > std::min(m1, m2)) throw ContractViolation("bound_check: more matched pairs than DIFs");
    if (m1 + m2 == 0) return {.holds = true};
    const Grid1D grid = m1 > 0 ? pb.difs1.front().grid : pb.difs2.front().grid;
    for (const auto* set : {&pb.difs1, &pb.difs2}) {
        for (const auto& f : *set) {
            if (!(f.grid == grid) || f.values.size() != grid.size) {
                throw ContractViolation("bound_check: grid mismatch");
            }
        }
    }
    if (!(pb.omega1 > 0.0 && pb.omega1 <= 1.0 && pb.omega2 > 0.0 && pb.omega2 <= 1.0)) {
        throw ContractViolation("bound_check: weights must lie in (0, 1]");
    }
    const std::size_t n = grid.size;
    const std::size_t cells = m1 + m2 - q;
    const double h = grid.spacing;

    // hat DIF of each sensor assigned to a partition cell (or null).
    auto hat1 = [&](std::size_t p) -> const Values* { return p < m1 ? &pb.difs1[p].values : nullptr; };
    auto hat2 = [&](std::size_t p) -> const Values* {
        if (p < q) return &pb.difs2[p].values;
        if (p >= m1) return &pb.difs2[p - m1 + q].values;
        return nullptr;
    };

    std::vector<std::size_t> cell(n, 0);
    if (pb.partition) {
        if (pb.partition->size() != n) throw ContractViolation("bound_check: partition size mismatch");
        cell = *pb.partition;
        for (auto c : cell) {
            if (c >= cells) throw ContractViolation("bound_check: partition label out of range");
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double best = -1.0;
            for (std::size_t p = 0; p < cells; ++p) {
                double a = 0.0;
                if (const auto* f = hat1(p)) a += (*f)[i];
                if (const auto* f = hat2(p)) a += (*f)[i];
                if (a > best) {
                    best = a;
                    cell[i] = p;
                }
            }
        }
    }

    Values v1(n, 0.0), v2(n, 0.0);
    for (const auto& f : pb.difs1) {
        for (std::size_t i = 0; i < n; ++i) v1[i] += f.values[i];
    }
    for (const auto& f : pb.difs2) {
        for (std::size_t i = 0; i < n; ++i) v2[i] += f.values[i];
    }

    BoundReport r;
    double k = 0.0;
    double delta = 0.0;
    for (std::size_t p = 0; p < cells; ++p) {
        Values part1(n, 0.0), part2(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (cell[i] == p) {
                part1[i] = v1[i];
                part2[i] = v2[i];
            }
        }
        const Values* h1 = hat1(p);
        const Values* h2 = hat2(p);
        delta = std::max(delta, sup_abs(h1 ? diff(part1, *h1) : part1));
        delta = std::max(delta, sup_abs(h2 ? diff(part2, *h2) : part2));
        k = std::max({k, trapezoid_abs(power(part1, pb.omega1), h), trapezoid_abs(power(part2, pb.omega2), h)});
        if (h1) k = std::max(k, trapezoid_abs(power(*h1, pb.omega1), h));
        if (h2) k = std::max(k, trapezoid_abs(power(*h2, pb.omega2), h));
    }

    const Values p1 = power(v1, pb.omega1);
    const Values p2 = power(v2, pb.omega2);
    Values exact(n), parallel(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) exact[i] = p1[i] * p2[i];
    for (std::size_t p = 0; p < q; ++p) {
        const Values a = power(pb.difs1[p].values, pb.omega1);
        const Values b = power(pb.difs2[p].values, pb.omega2);
        for (std::size_t i = 0; i < n; ++i) parallel[i] += a[i] * b[i];
    }

    r.discrepancy = trapezoid_abs(diff(parallel, exact), h);
    r.delta = delta;
    r.k = k;
    r.bound = static_cast<double>(m2) * k * std::pow(delta, pb.omega1) +
              static_cast<double>(2 * q + m1) * k * std::pow(delta, pb.omega2);
    r.tolerance = 1e-12 + 1e-9 * r.bound;
    r.holds = r.discrepancy <= r.bound + r.tolerance;
    return r;
}

}  // namespace cagci
