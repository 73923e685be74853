#include "cagci/bound.hpp"
#include "cagci/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cagci;

namespace {

GridFunction1D box(const Grid1D& g, double lo, double hi, double height) {
    GridFunction1D f;
    f.grid = g;
    for (std::size_t i = 0; i < g.size; ++i) f.values.push_back(g.at(i) >= lo && g.at(i) <= hi ? height : 0.0);
    return f;
}

GridFunction1D gauss(const Grid1D& g, double mean, double sd, double w = 1.0) {
    GaussianMixture v;
    v.push_back({w, Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, sd * sd)});
    return GridFunction1D::sample(v, g);
}

}  // namespace

TEST(Grid, TrapezoidNorm) {
    const Grid1D g{-20.0, 0.01, 4001};
    EXPECT_NEAR(l1_norm(gauss(g, 0.0, 1.0, 2.5)), 2.5, 1e-9);
    EXPECT_NEAR(sup_norm(gauss(g, 0.0, 1.0)), 1.0 / std::sqrt(2 * M_PI), 1e-12);
}

TEST(BoundCheck, CompactSupportsHaveNoDiscrepancy) {
    const Grid1D g{0.0, 0.01, 3001};
    BoundProblem pb;
    pb.difs1 = {box(g, 1, 5, 0.5), box(g, 20, 24, 0.3)};
    pb.difs2 = {box(g, 1, 5, 0.4), box(g, 10, 14, 0.2)};
    pb.matched = 1;
    const auto r = bound_check(pb);
    EXPECT_NEAR(r.delta, 0.0, 1e-15);
    EXPECT_LE(r.discrepancy, r.bound + r.tolerance);
    EXPECT_LT(r.discrepancy, 1e-12);
    EXPECT_TRUE(r.holds);
}

TEST(BoundCheck, SingleMatchedPairIsExact) {
    const Grid1D g{-15.0, 0.01, 3001};
    BoundProblem pb;
    pb.difs1 = {gauss(g, 0.0, 1.0)};
    pb.difs2 = {gauss(g, 0.5, 1.2)};
    pb.matched = 1;
    const auto r = bound_check(pb);
    EXPECT_LT(r.discrepancy, 1e-12);
    EXPECT_TRUE(r.holds);
}

TEST(BoundCheck, SeparationSweepIsMonotoneAndHolds) {
    double prev = INFINITY;
    for (double sep : {2.0, 5.0, 10.0, 20.0}) {
        const auto r = bound_check(separated_pair_problem(sep));
        EXPECT_TRUE(r.holds) << "separation " << sep;
        EXPECT_LE(r.discrepancy, r.bound + r.tolerance);
        EXPECT_LE(r.discrepancy, prev);
        prev = r.discrepancy;
        if (sep == 20.0) EXPECT_LT(r.discrepancy, 1e-6);
    }
}

TEST(BoundCheck, RejectsInconsistentInput) {
    const Grid1D g{0.0, 0.1, 11};
    const Grid1D h{0.0, 0.2, 11};
    BoundProblem pb;
    pb.difs1 = {gauss(g, 0.5, 1.0)};
    pb.difs2 = {gauss(h, 0.5, 1.0)};
    pb.matched = 1;
    EXPECT_THROW(bound_check(pb), ContractViolation);
    pb.difs2 = {gauss(g, 0.5, 1.0)};
    pb.matched = 2;
    EXPECT_THROW(bound_check(pb), ContractViolation);
}

TEST(VerifyBound, RandomCasesHold) {
    const auto r = verify_bound(25, 7);
    EXPECT_EQ(r.cases.size(), 25u);
    EXPECT_EQ(r.holds_rate, 1.0);
    ASSERT_EQ(r.separation_sweep.size(), 4u);
}
