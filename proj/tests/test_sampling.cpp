#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "eprlab/config.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/sampling.hpp"
#include "eprlab/state.hpp"

using namespace eprlab;

namespace {

WaveFunction1D gaussian(double s, GridSpec g = {2048, -12.0, 12.0}) {
    std::vector<cplx> a(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) a[i] = std::exp(-g.y(i) * g.y(i) / (4.0 * s * s));
    return normalize(WaveFunction1D(g, std::move(a)));
}

WaveFunction2D joint(double sigma, double omega0) {
    const PhysicalParams p{sigma, omega0, 1.0, 1.0};
    const auto g = auto_grid(p, std::nullopt, 0.0, 512);
    return build_joint_state({p, g, g});
}

}  // namespace

TEST(Rng, KnownSplitMixSequence) {
    // Reference outputs of splitmix64 seeded with 0.
    SplitMix64 sm(0);
    EXPECT_EQ(sm.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(sm.next(), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, UniformInUnitInterval) {
    Xoshiro256 rng(3);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Rng, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(SamplePositions, SymmetricMean) {
    const std::uint64_t n = 100000;
    const auto xs = sample_positions(gaussian(0.8), n, 17);
    const auto m = sample_moments(xs);
    EXPECT_LT(std::fabs(m.mean), 4.0 * m.std / std::sqrt(static_cast<double>(n)));
}

TEST(SamplePositions, StdWithinOnePercent) {
    const auto wf = gaussian(0.8);
    const double s = position_stats(wf).std;
    const auto m = sample_moments(sample_positions(wf, 100000, 18));
    EXPECT_NEAR(m.std / s, 1.0, 0.01);
    // Three standard deviations of the sample std of a Gaussian.
    EXPECT_LT(std::fabs(m.std - s) / s, 3.0 / std::sqrt(2.0 * 100000.0));
}

TEST(SamplePositions, CltRate) {
    const auto wf = gaussian(1.1);
    const double s = position_stats(wf).std;
    for (std::uint64_t n : {std::uint64_t{10000}, std::uint64_t{100000}}) {
        const auto m = sample_moments(sample_positions(wf, n, 100 + n));
        EXPECT_LT(std::fabs(m.std - s) / s, 3.0 * std::sqrt(2.0 / static_cast<double>(n))) << n;
    }
}

TEST(SamplePositions, ZeroDrawsIsEmpty) { EXPECT_TRUE(sample_positions(gaussian(1.0), 0, 1).empty()); }

TEST(SamplePositions, Deterministic) {
    const auto wf = gaussian(1.0);
    EXPECT_EQ(sample_positions(wf, 1000, 5), sample_positions(wf, 1000, 5));
    EXPECT_NE(sample_positions(wf, 1000, 5), sample_positions(wf, 1000, 6));
}

TEST(SamplePositions, KolmogorovSmirnovAgainstGridCdf) {
    const auto wf = gaussian(0.9);
    const InverseCdfSampler ref(wf.grid(), density(wf));
    const auto xs = sample_positions(wf, 20000, 8);
    // 0.1% critical value of the one-sample KS distance.
    EXPECT_LT(ks_statistic(xs, [&](double y) { return ref.cdf(y); }), 1.95 / std::sqrt(20000.0));
}

TEST(SampleJoint, EntangledCorrelation) {
    const auto pairs = sample_joint(joint(1.0, 2.0), 100000, 21);
    EXPECT_NEAR(sample_correlation(pairs), 0.969231, 0.01);
}

TEST(SampleJoint, ProductStateUncorrelated) {
    const auto pairs = sample_joint(joint(1.0, 0.25), 100000, 22);
    EXPECT_LT(std::fabs(sample_correlation(pairs)), 0.013);
}

TEST(SampleJoint, Deterministic) {
    const auto psi = joint(1.0, 2.0);
    const auto a = sample_joint(psi, 2000, 23);
    const auto b = sample_joint(psi, 2000, 23);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        ASSERT_EQ(a[k].y1, b[k].y1);
        ASSERT_EQ(a[k].y2, b[k].y2);
    }
}

TEST(Histogram, EmptySamples) {
    const auto h = histogram(std::vector<double>{}, DetectorGeometry{16, -1.0, 1.0, DetectorSide::B});
    EXPECT_EQ(h.total, 0u);
    for (auto c : h.counts) EXPECT_EQ(c, 0u);
}

TEST(Histogram, BinCentres) {
    const DetectorGeometry geom{8, -4.0, 4.0, DetectorSide::B};
    const std::vector<double> xs{-3.5, -3.5, 0.5, 3.5, -10.0, 10.0};
    const auto h = histogram(xs, geom);
    EXPECT_EQ(h.counts[0], 2u);
    EXPECT_EQ(h.counts[4], 1u);
    EXPECT_EQ(h.counts[7], 1u);
    EXPECT_EQ(h.underflow, 1u);
    EXPECT_EQ(h.overflow, 1u);
    EXPECT_EQ(h.total, 6u);
    EXPECT_DOUBLE_EQ(h.bin_lo(4), 0.0);
    EXPECT_DOUBLE_EQ(h.bin_hi(4), 1.0);
}

TEST(Histogram, ChiSquareAgainstAnalyticBins) {
    const double s = 0.8;
    const auto xs = sample_positions(gaussian(s), 100000, 31);
    const DetectorGeometry geom{40, -4.0 * s, 4.0 * s, DetectorSide::B};
    const auto h = histogram(xs, geom);
    auto cdf = [&](double y) { return 0.5 * (1.0 + std::erf(y / (std::numbers::sqrt2 * s))); };
    std::vector<double> prob(geom.n_bins);
    for (std::size_t b = 0; b < geom.n_bins; ++b) prob[b] = cdf(h.bin_hi(b)) - cdf(h.bin_lo(b));
    const auto chi = chi_square(h, prob);
    const double critical = boost::math::quantile(boost::math::chi_squared(static_cast<double>(chi.dof)), 0.999);
    EXPECT_LT(chi.statistic, critical);
}

TEST(Histogram, ChiSquareRejectsTheWrongWidth) {
    const auto xs = sample_positions(gaussian(0.8), 100000, 32);
    const DetectorGeometry geom{40, -3.2, 3.2, DetectorSide::B};
    const auto h = histogram(xs, geom);
    auto cdf = [](double y) { return 0.5 * (1.0 + std::erf(y / (std::numbers::sqrt2 * 0.85))); };
    std::vector<double> prob(geom.n_bins);
    for (std::size_t b = 0; b < geom.n_bins; ++b) prob[b] = cdf(h.bin_hi(b)) - cdf(h.bin_lo(b));
    const auto chi = chi_square(h, prob);
    const double critical = boost::math::quantile(boost::math::chi_squared(static_cast<double>(chi.dof)), 0.999);
    EXPECT_GT(chi.statistic, critical);
}

TEST(Histogram, ChiSquarePoolsSparseBins) {
    DetectorHistogram h;
    h.geometry = {4, 0.0, 4.0, DetectorSide::B};
    h.counts = {1, 50, 49, 0};
    h.total = 100;
    const std::vector<double> prob{0.01, 0.49, 0.49, 0.01};
    const auto chi = chi_square(h, prob);
    EXPECT_EQ(chi.dof, 1u);
}
