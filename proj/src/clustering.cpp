#include "cagci/clustering.hpp"

#include "cagci/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace cagci {

DisjointSetForest::DisjointSetForest(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSetForest::find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
        const std::size_t next = parent_[x];
        parent_[x] = root;
        x = next;
    }
    return root;
}

bool DisjointSetForest::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
}

ClusterDecomposition pre_cluster(const GaussianMixture& v, double t_alpha, double t_d) {
    if (!(t_alpha > 0.0) || !(t_d > 0.0)) {
        throw ContractViolation("pre_cluster: thresholds must be positive");
    }
    ClusterDecomposition out;
    out.component_count = v.size();

    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].weight > t_alpha) centers.push_back(i);
    }
    std::stable_sort(centers.begin(), centers.end(),
                     [&](std::size_t a, std::size_t b) { return v[a].weight > v[b].weight; });

    // Cholesky factors computed once per component.
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;
    factors.reserve(v.size());
    for (const auto& c : v) {
        factors.emplace_back(c.cov);
        if (factors.back().info() != Eigen::Success) throw NumericalError("pre_cluster: covariance not SPD");
    }
    auto distance = [&](std::size_t a, std::size_t b) {
        const Eigen::VectorXd d = v[a].mean - v[b].mean;
        return factors[a].matrixL().solve(d).squaredNorm() + factors[b].matrixL().solve(d).squaredNorm();
    };

    std::vector<bool> clustered(v.size(), false);
    for (auto center : centers) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == center || distance(center, i) < t_d) {
                members.push_back(i);
                clustered[i] = true;
            }
        }
        out.subsets.push_back(std::move(members));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!clustered[i]) out.unclustered.push_back(i);
    }
    return out;
}

ClusterDecomposition disjointify(const ClusterDecomposition& pre) {
    std::size_t n = pre.component_count;
    for (const auto& s : pre.subsets) {
        for (auto i : s) n = std::max(n, i + 1);
    }
    DisjointSetForest forest(n);
    return disjointify(pre, forest);
}

ClusterDecomposition disjointify(const ClusterDecomposition& pre, DisjointSetForest& forest) {
    std::vector<bool> member(forest.size(), false);
    for (const auto& s : pre.subsets) {
        for (auto i : s) {
            if (i >= forest.size()) throw ContractViolation("disjointify: index outside the forest");
            member[i] = true;
            forest.unite(s.front(), i);
        }
    }
    // Roots keyed by first appearance in ascending index order, so subsets
    // come out ordered by their smallest index.
    std::map<std::size_t, std::size_t> root_slot;
    ClusterDecomposition out;
    out.component_count = pre.component_count;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        if (!member[i]) continue;
        const auto root = forest.find(i);
        auto [it, inserted] = root_slot.try_emplace(root, out.subsets.size());
        if (inserted) out.subsets.emplace_back();
        out.subsets[it->second].push_back(i);
    }
    for (std::size_t i = 0; i < pre.component_count; ++i) {
        if (i >= member.size() || !member[i]) out.unclustered.push_back(i);
    }
    return out;
}

ClusterDecomposition cluster_mixture(const GaussianMixture& v, double t_alpha, double t_d) {
    return disjointify(pre_cluster(v, t_alpha, t_d));
}

MatchResult match_subsets(const GaussianMixture& v1, const ClusterDecomposition& l1,
                          const GaussianMixture& v2, const ClusterDecomposition& l2, double t_r,
                          double ospa_c, double ospa_p) {
    if (!(t_r > 0.0)) throw ContractViolation("match_subsets: T_r must be positive");
    MatchResult out;
    if (l1.empty() || l2.empty()) {
        for (std::size_t p = 0; p < l1.size(); ++p) out.unmatched_1.push_back(p);
        for (std::size_t q = 0; q < l2.size(); ++q) out.unmatched_2.push_back(q);
        return out;
    }
    const auto m1 = static_cast<Eigen::Index>(l1.size());
    const auto m2 = static_cast<Eigen::Index>(l2.size());
    std::vector<GaussianMixture> difs1, difs2;
    for (const auto& s : l1.subsets) difs1.push_back(v1.subset(s));
    for (const auto& s : l2.subsets) difs2.push_back(v2.subset(s));

    Eigen::MatrixXd d(m1, m2);
    for (Eigen::Index p = 0; p < m1; ++p) {
        for (Eigen::Index q = 0; q < m2; ++q) {
            d(p, q) = subset_distance(difs1[static_cast<std::size_t>(p)], difs2[static_cast<std::size_t>(q)],
                                      ospa_c, ospa_p);
        }
    }
    const Assignment best = best_assignment(d);
    std::vector<bool> used1(l1.size(), false), used2(l2.size(), false);
    for (const auto& [p, q] : best.pairs) {
        if (d(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) < t_r) {
            out.matched_pairs.emplace_back(p, q);
            used1[p] = true;
            used2[q] = true;
        }
    }
    std::sort(out.matched_pairs.begin(), out.matched_pairs.end());
    for (std::size_t p = 0; p < l1.size(); ++p) {
        if (!used1[p]) out.unmatched_1.push_back(p);
    }
    for (std::size_t q = 0; q < l2.size(); ++q) {
        if (!used2[q]) out.unmatched_2.push_back(q);
    }
    return out;
}

}  // namespace cagci
