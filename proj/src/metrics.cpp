#include "cagci/metrics.hpp"

#include "cagci/fov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cagci {

namespace {

struct Duals {
    std::vector<double> u;  // rows
    std::vector<double> v;  // columns
};

// Shortest-augmenting-path Hungarian method on a square matrix. Returns
// optimal dual potentials; every optimal assignment is a perfect matching
// on the edges with a(i,j) == u(i) + v(j).
Duals hungarian_duals(const Eigen::MatrixXd& a) {
    const auto n = static_cast<std::size_t>(a.rows());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    return {std::vector<double>(u.begin() + 1, u.end()), std::vector<double>(v.begin() + 1, v.end())};
}

// Bipartite matching on a boolean adjacency (rows x cols, square).
class TightGraph {
public:
    explicit TightGraph(std::vector<std::vector<bool>> adj)
        : adj_(std::move(adj)), n_(adj_.size()) {}

    // Whether the rows/columns not yet fixed admit a perfect matching.
    bool perfect_matching_exists(const std::vector<bool>& row_fixed, const std::vector<bool>& col_fixed) const {
        std::vector<long> match_col(n_, -1);
        for (std::size_t r = 0; r < n_; ++r) {
            if (row_fixed[r]) continue;
            std::vector<bool> seen(n_, false);
            if (!augment(r, col_fixed, match_col, seen)) return false;
        }
        return true;
    }

    bool edge(std::size_t r, std::size_t c) const { return adj_[r][c]; }

private:
    bool augment(std::size_t r, const std::vector<bool>& col_fixed, std::vector<long>& match_col,
                 std::vector<bool>& seen) const {
        for (std::size_t c = 0; c < n_; ++c) {
            if (!adj_[r][c] || col_fixed[c] || seen[c]) continue;
            seen[c] = true;
            if (match_col[c] < 0 || augment(static_cast<std::size_t>(match_col[c]), col_fixed, match_col, seen)) {
                match_col[c] = static_cast<long>(r);
                return true;
            }
        }
        return false;
    }

    std::vector<std::vector<bool>> adj_;
    std::size_t n_;
};

// Rows >= cols. Every column assigned once.
Assignment solve_tall(const Eigen::MatrixXd& d) {
    const auto rows = static_cast<std::size_t>(d.rows());
    const auto cols = static_cast<std::size_t>(d.cols());
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(d.rows(), d.rows());
    sq.leftCols(d.cols()) = d;
    const Duals duals = hungarian_duals(sq);

    const double tol = 1e-9 * std::max(1.0, sq.cwiseAbs().maxCoeff()) * static_cast<double>(rows);
    std::vector<std::vector<bool>> adj(rows, std::vector<bool>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < rows; ++c) {
            const double slack = sq(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - duals.u[r] - duals.v[c];
            adj[r][c] = std::abs(slack) <= tol;
        }
    }
    const TightGraph graph(std::move(adj));
    std::vector<bool> row_fixed(rows, false), col_fixed(rows, false);
    if (!graph.perfect_matching_exists(row_fixed, col_fixed)) {
        throw NumericalError("best_assignment: dual potentials lost tightness");
    }

    Assignment out;
    for (std::size_t c = 0; c < cols; ++c) {
        bool placed = false;
        for (std::size_t r = 0; r < rows && !placed; ++r) {
            if (row_fixed[r] || !graph.edge(r, c)) continue;
            row_fixed[r] = true;
            col_fixed[c] = true;
            if (graph.perfect_matching_exists(row_fixed, col_fixed)) {
                out.pairs.emplace_back(r, c);
                out.cost += d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                placed = true;
            } else {
                row_fixed[r] = false;
                col_fixed[c] = false;
            }
        }
        if (!placed) throw NumericalError("best_assignment: no feasible completion");
    }
    return out;
}

}  // namespace

Assignment best_assignment(const Eigen::MatrixXd& cost) {
    if (cost.size() == 0) return {};
    if (!cost.allFinite() || (cost.array() < 0.0).any()) {
        throw ContractViolation("best_assignment: entries must be finite and nonnegative");
    }
    if (cost.rows() >= cost.cols()) {
        Assignment a = solve_tall(cost);
        std::sort(a.pairs.begin(), a.pairs.end());
        return a;
    }
    Assignment t = solve_tall(cost.transpose());
    for (auto& pr : t.pairs) std::swap(pr.first, pr.second);
    std::sort(t.pairs.begin(), t.pairs.end());
    return t;
}

double ospa(const PointSet& x, const PointSet& y, double c, double p) {
    if (!(c > 0.0) || !(p >= 1.0)) throw ContractViolation("ospa: requires c > 0 and p >= 1");
    const PointSet& big = x.size() >= y.size() ? x : y;
    const PointSet& small = x.size() >= y.size() ? y : x;
    const std::size_t n = big.size();
    const std::size_t m = small.size();
    if (n == 0) return 0.0;
    double total = std::pow(c, p) * static_cast<double>(n - m);
    if (m > 0) {
        Eigen::MatrixXd d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (big[i].size() != small[j].size()) throw ContractViolation("ospa: point dimension mismatch");
                d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    std::pow(std::min((big[i] - small[j]).norm(), c), p);
            }
        }
        total += best_assignment(d).cost;
    }
    return std::min(c, std::pow(total / static_cast<double>(n), 1.0 / p));
}

PointSet subset_points(const GaussianMixture& v, const Eigen::MatrixXd& position_matrix) {
    PointSet heavy, all;
    for (const auto& comp : v) {
        Eigen::VectorXd pos = position_matrix * comp.mean;
        if (comp.weight > kSubsetPointWeight) heavy.push_back(pos);
        all.push_back(std::move(pos));
    }
    return heavy.empty() ? all : heavy;
}

double subset_distance(const GaussianMixture& a, const GaussianMixture& b, double c, double p) {
    const GaussianMixture& ref = a.empty() ? b : a;
    if (ref.empty()) return 0.0;
    return subset_distance(a, b, c, p, position_projection(ref[0].dim()));
}

double subset_distance(const GaussianMixture& a, const GaussianMixture& b, double c, double p,
                       const Eigen::MatrixXd& position_matrix) {
    return ospa(subset_points(a, position_matrix), subset_points(b, position_matrix), c, p);
}

}  // namespace cagci
