#pragma once

#include "cagci/gaussian.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace cagci {

/// Union-find over component indices with union by rank and path
/// compression.
class DisjointSetForest {
public:
    explicit DisjointSetForest(std::size_t n);

    std::size_t find(std::size_t x);
    /// Returns false when both elements already share a root.
    bool unite(std::size_t a, std::size_t b);
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

/// Index subsets of one mixture's components. Before disjointify the
/// subsets may overlap; afterwards they are pairwise disjoint.
struct ClusterDecomposition {
    std::vector<std::vector<std::size_t>> subsets;
    /// Components that belong to no subset.
    std::vector<std::size_t> unclustered;
    /// Size of the underlying mixture.
    std::size_t component_count = 0;

    std::size_t size() const { return subsets.size(); }
    bool empty() const { return subsets.empty(); }
};

/// Matched subset pairs (index into decomposition 1, index into
/// decomposition 2) ordered by the first index, plus the unmatched subsets
/// of each side in ascending order.
struct MatchResult {
    std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;
    std::vector<std::size_t> unmatched_1;
    std::vector<std::size_t> unmatched_2;

    std::size_t q() const { return matched_pairs.size(); }
};

/// Every component heavier than `t_alpha` is a cluster center (taken in
/// descending weight order); its cluster holds every component whose
/// corrected Mahalanobis distance to it is below `t_d`. Clusters may
/// overlap.
ClusterDecomposition pre_cluster(const GaussianMixture& v, double t_alpha, double t_d);

/// Merges overlapping clusters with union-find. Subsets are sorted
/// internally and ordered by their smallest index.
ClusterDecomposition disjointify(const ClusterDecomposition& pre);
ClusterDecomposition disjointify(const ClusterDecomposition& pre, DisjointSetForest& forest);

/// pre_cluster followed by disjointify.
ClusterDecomposition cluster_mixture(const GaussianMixture& v, double t_alpha, double t_d);

/// Optimal assignment of subsets on the OSPA distance of their positional
/// point sets; a pair is kept only when its distance is below `t_r`.
MatchResult match_subsets(const GaussianMixture& v1, const ClusterDecomposition& l1,
                          const GaussianMixture& v2, const ClusterDecomposition& l2, double t_r,
                          double ospa_c, double ospa_p);

}  // namespace cagci
