#include "cagci/fusion.hpp"
#include "cagci/gmphd.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cagci;
using namespace cagci::testing;

namespace {

const Rect kArea{0, 1500, 0, 1000};
const FieldOfView kFov1 = FieldOfView::upward({400, 0}, 60, kArea);
const FieldOfView kFov2 = FieldOfView::upward({800, 0}, 60, kArea);

GaussianMixture one(const GaussianComponent& c) {
    GaussianMixture v;
    v.push_back(c);
    return v;
}

void expect_mixtures_near(const GaussianMixture& a, const GaussianMixture& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i].weight, b[i].weight, tol * std::max(1.0, b[i].weight));
        EXPECT_LT((a[i].mean - b[i].mean).norm(), tol * (1.0 + b[i].mean.norm()));
        EXPECT_LT((a[i].cov - b[i].cov).norm(), tol * (1.0 + b[i].cov.norm()));
    }
}

}  // namespace

TEST(GciStandard, SelfFusionClosure) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        const auto v = one(random_component(rng, 1 + t % 4));
        expect_mixtures_near(gci_fuse_standard(v, v, 0.5, 0.5), v, 1e-9);
    }
}

TEST(GciStandard, ComponentCountAndEmpty) {
    GaussianMixture a, b;
    for (int i = 0; i < 3; ++i) a.push_back(track(0.5, 100.0 * i, 0));
    for (int i = 0; i < 2; ++i) b.push_back(track(0.5, 100.0 * i, 0));
    EXPECT_EQ(gci_fuse_standard(a, b, 0.5, 0.5).size(), 6u);
    EXPECT_TRUE(gci_fuse_standard(a, {}, 0.5, 0.5).empty());
}

TEST(GciStandard, MismatchCollapse) {
    const auto a = one(track(0.9, 300, 300, 25.0)), b = one(track(0.8, 500, 300, 25.0));
    const auto f = gci_fuse_standard(a, b, 0.5, 0.5);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_LT(f[0].weight, 1e-8 * 0.9 * 0.8);
}

TEST(GciStandard, InvalidWeightsThrow) {
    const auto a = one(track(1, 0, 0));
    EXPECT_THROW(gci_fuse_standard(a, a, 0.7, 0.7), ContractViolation);
    EXPECT_THROW(gci_fuse_standard(a, a, 0.0, 1.0), ContractViolation);
}

TEST(GciParallel, SinglePairEqualsStandard) {
    std::mt19937_64 rng(22);
    GaussianMixture a, b;
    for (int i = 0; i < 3; ++i) a.push_back(random_component(rng, 4));
    for (int i = 0; i < 2; ++i) b.push_back(random_component(rng, 4));
    ClusterDecomposition la, lb;
    la.subsets = {{0, 1, 2}};
    la.component_count = 3;
    lb.subsets = {{0, 1}};
    lb.component_count = 2;
    MatchResult m;
    m.matched_pairs = {{0, 0}};
    expect_mixtures_near(gci_fuse_parallel(a, la, b, lb, m, 0.5, 0.5), gci_fuse_standard(a, b, 0.5, 0.5), 1e-12);
}

TEST(GciParallel, NoPairsIsEmpty) {
    const auto a = one(track(1, 0, 0));
    ClusterDecomposition l;
    l.subsets = {{0}};
    l.component_count = 1;
    EXPECT_TRUE(gci_fuse_parallel(a, l, a, l, MatchResult{}, 0.5, 0.5).empty());
}

TEST(GciParallel, SeparatedPairsOmitNegligibleCrossTerms) {
    GaussianMixture a, b;
    a.push_back(track(0.9, 100, 100));
    a.push_back(track(0.9, 600, 100));
    b.push_back(track(0.8, 102, 100));
    b.push_back(track(0.7, 598, 100));
    ClusterDecomposition la, lb;
    la.subsets = lb.subsets = {{0}, {1}};
    la.component_count = lb.component_count = 2;
    MatchResult m;
    m.matched_pairs = {{0, 0}, {1, 1}};
    const auto par = gci_fuse_parallel(a, la, b, lb, m, 0.5, 0.5);
    const auto full = gci_fuse_standard(a, b, 0.5, 0.5);  // order: (0,0) (0,1) (1,0) (1,1)
    ASSERT_EQ(par.size(), 2u);
    expect_mixtures_near(par, full.subset({0, 3}), 1e-12);
    EXPECT_LT(full[1].weight + full[2].weight, 1e-8);
}

TEST(GciParallel, ComponentCount) {
    GaussianMixture a, b;
    for (int i = 0; i < 5; ++i) a.push_back(track(0.5, 10.0 * i, 0));
    for (int i = 0; i < 3; ++i) b.push_back(track(0.5, 10.0 * i, 0));
    ClusterDecomposition la, lb;
    la.subsets = {{0, 1}, {2, 3, 4}};
    la.component_count = 5;
    lb.subsets = {{0, 1}, {2}};
    lb.component_count = 3;
    MatchResult m;
    m.matched_pairs = {{0, 0}, {1, 1}};
    EXPECT_EQ(gci_fuse_parallel(a, la, b, lb, m, 0.5, 0.5).size(), 7u);
}

TEST(SelectPreserved, InsideOutsideAndStraddling) {
    const auto fov = FieldOfView::upward({0, 0}, 90);  // half plane y >= 0
    std::vector<GaussianMixture> difs;
    difs.push_back(one(track(1, 0, -300, 25)));  // outside
    difs.push_back(one(track(1, 0, 300, 25)));   // inside
    // 40% inside: mean at y = -sigma * z_{0.6}.
    const double sigma = 10.0, z60 = 0.2533471031357997;
    difs.push_back(one(track(1, 0, -sigma * z60, sigma * sigma)));
    difs.push_back(one(track(0, 0, -300, 25)));  // zero mass
    const auto beta = select_preserved(difs, fov, 0.5, 4096);
    EXPECT_TRUE(beta[0]);
    EXPECT_FALSE(beta[1]);
    EXPECT_NEAR(fov_mass(difs[2], fov, 4096), 0.4, 0.01);
    EXPECT_TRUE(beta[2]);
    EXPECT_FALSE(beta[3]);
}

TEST(CompensateFuse, CompleteTrustIsConcatenation) {
    std::mt19937_64 rng(23);
    const auto m = one(random_component(rng, 4));
    const auto p1 = one(random_component(rng, 4)), p2 = one(random_component(rng, 4));
    const auto out = compensate_fuse(m, p1, p2, 1.0, 1.0, 1.0);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].weight, m[0].weight);
    EXPECT_EQ(out[1].weight, p1[0].weight);
    EXPECT_EQ(out[2].cov, p2[0].cov);
}

TEST(CompensateFuse, ZeroDeltaDropsPreserved) {
    const auto m = one(track(0.9, 0, 0));
    const auto out = compensate_fuse(m, one(track(0.5, 100, 0)), one(track(0.5, 200, 0)), 0.0, 0.8, 0.8);
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_EQ(out[i].weight, 0.0);
    EXPECT_NEAR(mixture_mass(out), 0.9, 1e-15);
}

TEST(CompensateFuse, WeightFromKappa) {
    const auto c = track(1.0, 50, 50, 9.0);
    const auto out = compensate_fuse({}, one(c), {}, 0.9, 0.8, 0.8);
    ASSERT_EQ(out.size(), 1u);
    // kappa(0.8, 9 I_4) = sqrt((2 pi 9 / 0.8)^4 / (2 pi 9)^3.2)
    const double kappa = std::sqrt(std::pow(2 * M_PI * 9 / 0.8, 4) / std::pow(2 * M_PI * 9, 3.2));
    EXPECT_NEAR(out[0].weight, std::pow(0.9, 0.2) * kappa, 1e-12);
    EXPECT_TRUE(out[0].cov.isApprox(c.cov / 0.8));
}

TEST(CompensateFuse, ZeroOmegaBarWithPreservedThrows) {
    EXPECT_THROW(compensate_fuse({}, one(track(1, 0, 0)), {}, 0.9, 0.0, 0.8), ContractViolation);
    EXPECT_NO_THROW(compensate_fuse({}, {}, {}, 0.9, 0.0, 0.8));
}

TEST(CaGci, CommonTargetFusesPairwise) {
    const auto a = one(track(0.95, 600, 500, 16)), b = one(track(0.9, 603, 498, 16));
    FusionParams p;
    const auto r = ca_gci_fuse_detailed(a, b, kFov1, kFov2, p);
    EXPECT_EQ(r.match.q(), 1u);
    expect_mixtures_near(r.fused, gci_fuse_standard(a, b, 0.5, 0.5), 1e-12);
    EXPECT_EQ(extract_estimates(prune_merge(r.fused, HousekeepingParams{}), 0.5).size(), 1u);
}

TEST(CaGci, DisjointVisibilityPreservesBoth) {
    // (100, 200) is seen only by sensor 1, (1100, 300) only by sensor 2.
    ASSERT_TRUE(kFov1.contains({100, 200}));
    ASSERT_FALSE(kFov2.contains({100, 200}));
    ASSERT_TRUE(kFov2.contains({1100, 300}));
    ASSERT_FALSE(kFov1.contains({1100, 300}));
    const auto a = one(track(0.95, 100, 200, 16)), b = one(track(0.95, 1100, 300, 16));
    const auto r = ca_gci_fuse_detailed(a, b, kFov1, kFov2, FusionParams{});
    EXPECT_EQ(r.match.q(), 0u);
    EXPECT_EQ(r.preserved1.size(), 1u);
    EXPECT_EQ(r.preserved2.size(), 1u);
    EXPECT_EQ(extract_estimates(r.fused, 0.5).size(), 2u);
    EXPECT_TRUE(extract_estimates(gci_fuse_standard(a, b, 0.5, 0.5), 0.5).empty());
}

TEST(CaGci, GhostInsideOtherFovIsDeleted) {
    GaussianMixture a, b;
    a.push_back(track(0.95, 600, 500, 16));
    a.push_back(track(0.6, 620, 300, 16));  // ghost, inside both FoVs
    b.push_back(track(0.95, 601, 501, 16));
    const auto r = ca_gci_fuse_detailed(a, b, kFov1, kFov2, FusionParams{});
    EXPECT_EQ(r.match.q(), 1u);
    EXPECT_TRUE(r.preserved1.empty());
    EXPECT_EQ(extract_estimates(r.fused, 0.5).size(), 1u);
}

TEST(CaGci, OneSubsetPerSensorEqualsStandard) {
    std::mt19937_64 rng(24);
    std::normal_distribution<double> jitter(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        GaussianMixture a, b;
        // Equal counts keep the subsets' point sets comparable, so the pair matches.
        for (int i = 0; i < 1 + t % 3; ++i) {
            a.push_back(track(0.9, 600 + jitter(rng), 500 + jitter(rng), 16));
            b.push_back(track(0.8, 600 + jitter(rng), 500 + jitter(rng), 16));
        }
        const auto r = ca_gci_fuse_detailed(a, b, kFov1, kFov2, FusionParams{});
        ASSERT_EQ(r.decomposition1.size(), 1u);
        ASSERT_EQ(r.decomposition2.size(), 1u);
        ASSERT_EQ(r.match.q(), 1u);
        expect_mixtures_near(r.fused, gci_fuse_standard(a, b, 0.5, 0.5), 1e-9);
    }
}

TEST(Sequential, TwoSensorsEqualsCaGci) {
    GaussianMixture a, b;
    a.push_back(track(0.95, 600, 500, 16));
    a.push_back(track(0.9, 100, 200, 16));
    b.push_back(track(0.9, 603, 498, 16));
    const FusionParams p;
    expect_mixtures_near(sequential_fuse({{a, kFov1}, {b, kFov2}}, p), ca_gci_fuse(a, b, kFov1, kFov2, p), 1e-15);
    const auto single = sequential_fuse({{a, kFov1}}, p);
    expect_mixtures_near(single, a, 1e-15);
}

TEST(Sequential, IdenticalSensorsKeepCardinality) {
    GaussianMixture a;
    a.push_back(track(1.0, 600, 500, 16));
    a.push_back(track(1.0, 700, 600, 16));
    const auto out = sequential_fuse({{a, kFov1}, {a, kFov1}, {a, kFov1}}, FusionParams{});
    EXPECT_NEAR(mixture_mass(out), 2.0, 0.1);
}

TEST(FusionParams, Validation) {
    FusionParams p;
    EXPECT_NO_THROW(p.validate());
    p.omega1 = 0.6;
    EXPECT_THROW(p.validate(), ContractViolation);
    p = FusionParams{};
    p.gamma = 1.0;
    EXPECT_THROW(p.validate(), ContractViolation);
    p = FusionParams{};
    p.t_r = -1;
    EXPECT_THROW(p.validate(), ContractViolation);
}
