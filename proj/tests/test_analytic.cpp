#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/rng.hpp"

using namespace eprlab;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::vector<PhysicalParams> random_params(std::uint64_t seed, int n, double lo = 0.1, double hi = 10.0) {
    Xoshiro256 rng(seed);
    auto draw = [&] { return std::exp(std::log(lo) + rng.uniform() * std::log(hi / lo)); };
    std::vector<PhysicalParams> out;
    for (int k = 0; k < n; ++k) out.push_back({draw(), draw(), draw(), 1.0});
    return out;
}

}  // namespace

TEST(InitialSpreads, MinimumUncertaintyPair) {
    const auto s = initial_spreads({1.0, 0.25, 1.0, 1.0});
    EXPECT_NEAR(s.dp2y, kSqrt2, 1e-12);
    EXPECT_NEAR(s.dy2, 1.0 / (2.0 * kSqrt2), 1e-12);
}

TEST(InitialSpreads, BroadEnvelopeLimit) {
    EXPECT_NEAR(initial_spreads({1.0, 1e8, 1.0, 1.0}).dp2y, 1.0, 1e-12);
}

TEST(InitialSpreads, WorkedValues) {
    const auto s = initial_spreads({1.0, 2.0, 1.0, 1.0});
    EXPECT_NEAR(s.dp2y, 1.0077822, 1e-7);
    EXPECT_NEAR(s.dy2, 2.0155644, 1e-7);
    EXPECT_DOUBLE_EQ(s.dy1, s.dy2);
    EXPECT_DOUBLE_EQ(s.dp1y, s.dp2y);
}

TEST(ReducedSpreads, WorkedValues) {
    const auto r = reduced_spreads({1.0, 2.0, 1.0, 1.0}, 0.5);
    EXPECT_NEAR(r.dy2, 0.683660, 1e-6);
    EXPECT_NEAR(r.dp2y, 0.731357, 1e-6);
    EXPECT_DOUBLE_EQ(r.dp1y, 1.0);
    EXPECT_DOUBLE_EQ(r.omega, r.dy2);
}

TEST(ReducedSpreads, DisentangledForEveryEpsilon) {
    const PhysicalParams p{1.0, 0.25, 1.0, 1.0};
    const auto init = initial_spreads(p);
    for (double eps : {1e-4, 0.01, 0.1, 1.0, 10.0, 1e3}) {
        const auto r = reduced_spreads(p, eps);
        EXPECT_NEAR(r.dp2y, kSqrt2, 1e-12) << eps;
        EXPECT_NEAR(r.dy2, 0.3535534, 1e-7) << eps;
        EXPECT_NEAR(r.dp2y, init.dp2y, 1e-12) << eps;
        EXPECT_NEAR(r.dy2, init.dy2, 1e-12) << eps;
    }
}

TEST(ReducedSpreads, TinyPointerApproachesSharpLimit) {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0};
    EXPECT_NEAR(reduced_spreads(p, 1e-6).dp2y, std::sqrt(1.0 + 1.0 / 64.0), 1e-6);
}

TEST(ReducedSpreads, RadicalFormAgreesWithProductForm) {
    for (const auto& p : random_params(11, 200)) {
        for (double eps : {0.05, 0.3, 2.0}) {
            const auto r = reduced_spreads(p, eps);
            EXPECT_NEAR(r.dp2y / min_uncertainty_momentum(p.hbar, r.dy2), 1.0, 1e-12);
        }
    }
}

TEST(ReducedSpreads, UncertaintyProductIsHalfHbar) {
    for (const auto& p : random_params(12, 200)) {
        for (double eps : {0.01, 0.5, 7.0}) {
            const auto r = reduced_spreads(p, eps);
            EXPECT_NEAR(r.dy2 * r.dp2y / (0.5 * p.hbar), 1.0, 1e-12);
        }
    }
}

TEST(ReducedSpreads, NonIncreasingInEpsilonAndBoundedByInitial) {
    for (const auto& p : random_params(13, 100)) {
        const double init = initial_spreads(p).dp2y;
        double prev = std::numeric_limits<double>::infinity();
        for (double eps = 1e-3; eps < 1e3; eps *= 1.5) {
            const double dp = reduced_spreads(p, eps).dp2y;
            EXPECT_LE(dp, prev * (1.0 + 1e-14));
            EXPECT_LE(dp, init * (1.0 + 1e-14));
            prev = dp;
        }
    }
}

TEST(ReducedSpreads, StrictlyBelowInitialOffTheDisentanglingLine) {
    for (auto p : random_params(14, 50)) {
        if (std::fabs(p.omega0 / disentangling_omega0(p) - 1.0) < 1e-3) continue;
        EXPECT_LT(reduced_spreads(p, 1.0).dp2y, initial_spreads(p).dp2y);
    }
}

TEST(ReducedSpreads, HbarScaling) {
    const double lambda = 3.7;
    for (const auto& p : random_params(15, 50)) {
        PhysicalParams q = p;
        q.hbar *= lambda;
        q.sigma *= lambda;
        for (double eps : {0.1, 1.0}) {
            const auto a = reduced_spreads(p, eps);
            const auto b = reduced_spreads(q, eps);
            EXPECT_NEAR(b.dp2y / a.dp2y, lambda, 1e-12 * lambda);
            EXPECT_NEAR(b.dp1y / a.dp1y, lambda, 1e-12 * lambda);
            EXPECT_NEAR(b.dy2 / a.dy2, 1.0, 1e-12);
        }
        const auto ia = initial_spreads(p);
        const auto ib = initial_spreads(q);
        EXPECT_NEAR(ib.dp2y / ia.dp2y, lambda, 1e-12 * lambda);
        EXPECT_NEAR(ib.dy2 / ia.dy2, 1.0, 1e-12);
    }
}

TEST(ReducedSpreads, LocalizesToPointerWidthForLargeScales) {
    const PhysicalParams p{1e3, 1e3, 1.0, 1.0};
    for (double eps : {0.05, 0.1, 0.5}) {
        const double dev = std::fabs(reduced_spreads(p, eps).dy2 - eps) / eps;
        // First-order size of the corrections in the width formula.
        const double bound = p.hbar * p.hbar / (8.0 * p.sigma * p.sigma * eps * eps) +
                             eps * eps / (2.0 * p.omega0 * p.omega0);
        EXPECT_LT(dev, 1e-2);
        EXPECT_LE(dev, 1.01 * bound);
    }
}

TEST(SharpLimit, EqualsInitialMomentumSpreadBitForBit) {
    EXPECT_NEAR(limit_dp2_eps_to_zero({1.0, 2.0, 1.0, 1.0}), 1.0077822, 1e-7);
    EXPECT_NEAR(limit_dp2_eps_to_zero({1.0, 0.25, 1.0, 1.0}), kSqrt2, 1e-12);
    for (const auto& p : random_params(16, 100)) EXPECT_EQ(limit_dp2_eps_to_zero(p), initial_spreads(p).dp2y);
}

TEST(StrongCorrelation, WorkedValues) {
    const PhysicalParams p{10.0, 10.0, 1.0, 1.0};
    const auto a = approx_dp2_strong_correlation(p, 0.1);
    EXPECT_NEAR(a.value, 4.472136, 1e-6);
    EXPECT_TRUE(a.regime_ok);
    const double exact = reduced_spreads(p, 0.1).dp2y;
    EXPECT_NEAR(exact, 4.47236, 1e-5);
    EXPECT_NEAR(std::fabs(a.value - exact) / exact, 5e-5, 1e-5);
    EXPECT_NEAR(approx_dp2_strong_correlation(p, 0.05).value, 1.0 / std::sqrt(0.02), 1e-9);
}

TEST(StrongCorrelation, TinyPointerGivesSigma) {
    EXPECT_NEAR(approx_dp2_strong_correlation({10.0, 10.0, 1.0, 1.0}, 1e-9).value, 10.0, 1e-9);
}

TEST(StrongCorrelation, RegimeFlagFailsForWeakCorrelation) {
    EXPECT_FALSE(approx_dp2_strong_correlation({1.0, 0.25, 1.0, 1.0}, 0.1).regime_ok);
}

TEST(StrongCorrelation, ShrinkingPointerIncreasesSpreadInRegime) {
    const PhysicalParams p{10.0, 10.0, 1.0, 1.0};
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        const auto a = approx_dp2_strong_correlation(p, eps);
        ASSERT_TRUE(a.regime_ok) << eps;
        const double exact = reduced_spreads(p, eps).dp2y;
        EXPECT_GT(exact, prev);
        prev = exact;
    }
}

TEST(Disentanglement, Examples) {
    EXPECT_TRUE(is_disentangled({1.0, 0.25, 1.0, 1.0}, 1e-12));
    EXPECT_FALSE(is_disentangled({1.0, 2.0, 1.0, 1.0}, 1e-12));
    EXPECT_TRUE(is_disentangled({2.0, 0.125, 1.0, 1.0}, 1e-12));
}

TEST(PositionCorrelation, Examples) {
    EXPECT_NEAR(position_correlation({1.0, 0.25, 1.0, 1.0}), 0.0, 1e-15);
    EXPECT_NEAR(position_correlation({1.0, 2.0, 1.0, 1.0}), 3.9375 / 4.0625, 1e-15);
    EXPECT_NEAR(position_correlation({1.0, 2.0, 1.0, 1.0}), 0.969231, 1e-6);
    EXPECT_NEAR(position_correlation({1e6, 2.0, 1.0, 1.0}), 1.0, 1e-12);
}

TEST(ReducedMean, CentredPointerGivesZeroMean) {
    EXPECT_EQ(reduced_mean({1.0, 2.0, 1.0, 1.0}, {0.5, 0.0}), 0.0);
}

TEST(ReducedMean, DisentangledPairIgnoresPointerOffset) {
    EXPECT_NEAR(reduced_mean({1.0, 0.25, 1.0, 1.0}, {0.5, 0.7}), 0.0, 1e-15);
}
