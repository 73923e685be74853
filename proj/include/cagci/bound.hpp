#pragma once

#include "cagci/gaussian.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cagci {

/// Uniform 1-D grid.
struct Grid1D {
    double start = 0.0;
    double spacing = 1.0;
    std::size_t size = 0;

    double at(std::size_t i) const { return start + spacing * static_cast<double>(i); }
    bool operator==(const Grid1D&) const = default;
};

/// Nonnegative function sampled on a uniform grid.
struct GridFunction1D {
    Grid1D grid;
    std::vector<double> values;

    /// Samples a 1-D Gaussian mixture.
    static GridFunction1D sample(const GaussianMixture& v, const Grid1D& grid);
};

/// Trapezoid-rule L1 norm.
double l1_norm(const GridFunction1D& f);
double sup_norm(const GridFunction1D& f);

/// Input of the partition-based error bound. The first `matched` DIFs of
/// each sensor are matched pairwise; the rest are unmatched.
struct BoundProblem {
    std::vector<GridFunction1D> difs1;
    std::vector<GridFunction1D> difs2;
    std::size_t matched = 0;
    double omega1 = 0.5;
    double omega2 = 0.5;
    /// Partition cell of each grid point, in [0, M1 + M2 - Q). When absent,
    /// each point goes to the cell whose DIFs dominate there.
    std::optional<std::vector<std::size_t>> partition;
};

struct BoundReport {
    double discrepancy = 0.0;  // || parallel - exact ||_1
    double bound = 0.0;        // M2 K delta^w1 + (2Q + M1) K delta^w2
    double delta = 0.0;
    double k = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

/// Evaluates both fusion results and the L1 bound on the grid.
BoundReport bound_check(const BoundProblem& problem);

}  // namespace cagci
