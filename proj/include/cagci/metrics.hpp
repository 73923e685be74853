#pragma once

#include "cagci/gaussian.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace cagci {

using PointSet = std::vector<Eigen::VectorXd>;

/// Row/column pairs of a binary assignment matrix plus its total cost.
struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double cost = 0.0;
};

/// Minimum-cost assignment in which every element of the smaller dimension
/// is assigned exactly once. Among optimal assignments the one whose pair
/// list (ordered by the smaller dimension's index) is lexicographically
/// smallest is returned. Entries must be finite and nonnegative.
Assignment best_assignment(const Eigen::MatrixXd& cost);

/// OSPA distance with cutoff `c` and order `p`. Two empty sets are at
/// distance 0.
double ospa(const PointSet& x, const PointSet& y, double c, double p);

/// Weight above which a component's mean represents its subset in
/// subset_distance.
inline constexpr double kSubsetPointWeight = 0.1;

/// Positional point set of a GC subset: projected means of the components
/// heavier than kSubsetPointWeight, or of all components when none is.
PointSet subset_points(const GaussianMixture& v, const Eigen::MatrixXd& position_matrix);

/// OSPA between the positional point sets of two GC subsets.
double subset_distance(const GaussianMixture& a, const GaussianMixture& b, double c, double p);

double subset_distance(const GaussianMixture& a, const GaussianMixture& b, double c, double p,
                       const Eigen::MatrixXd& position_matrix);

}  // namespace cagci
