#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/config.hpp"
#include "eprlab/evolution.hpp"
#include "eprlab/state.hpp"

using namespace eprlab;

namespace {

constexpr double kW0 = 0.3535534;

WaveFunction1D packet(double w, GridSpec g = {8192, -100.0, 100.0}, double k0 = 0.0) {
    std::vector<cplx> a(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double y = g.y(i);
        a[i] = std::exp(-y * y / (4.0 * w * w)) * std::polar(1.0, k0 * y);
    }
    return normalize(WaveFunction1D(g, std::move(a)));
}

}  // namespace

TEST(GaussianWidth, Values) {
    EXPECT_DOUBLE_EQ(gaussian_width_at(kW0, {0.0, 1.0, 1.0}), kW0);
    EXPECT_NEAR(gaussian_width_at(kW0, {1.0, 1.0, 1.0}), 1.4577380, 1e-7);
}

TEST(GaussianWidth, LinearAsymptote) {
    const double t = 1e6;
    EXPECT_NEAR(gaussian_width_at(kW0, {t, 1.0, 1.0}) / (t / (2.0 * kW0)), 1.0, 1e-9);
}

TEST(FreePropagate, ZeroTimeIsIdentity) {
    const auto wf = packet(kW0, {1024, -10.0, 10.0});
    const auto out = free_propagate(wf, {0.0, 1.0, 1.0});
    for (std::size_t i = 0; i < wf.size(); ++i) EXPECT_NEAR(std::abs(out[i] - wf[i]), 0.0, 1e-12);
}

TEST(FreePropagate, GaussianSpreading) {
    const auto out = free_propagate(packet(kW0), {1.0, 1.0, 1.0});
    EXPECT_NEAR(position_stats(out).std, 1.4577380, 1e-6);
}

TEST(FreePropagate, MomentumDistributionInvariant) {
    const auto wf = packet(0.6, {8192, -100.0, 100.0}, 0.4);
    const double dp = momentum_std_spectral(wf);
    for (double t : {0.3, 1.0, 4.0}) {
        EXPECT_NEAR(momentum_std_spectral(free_propagate(wf, {t, 1.0, 1.0})) / dp, 1.0, 1e-10);
    }
}

TEST(FreePropagate, Unitary) {
    const auto wf = packet(kW0);
    for (double t : {0.5, 2.0, 5.0, 10.0}) EXPECT_NEAR(l2_norm(free_propagate(wf, {t, 1.0, 1.0})), 1.0, 1e-10) << t;
}

TEST(FreePropagate, MassAndHbarEnterAsHbarOverMass) {
    const auto wf = packet(0.5);
    const auto a = free_propagate(wf, {2.0, 2.0, 1.0});
    EXPECT_NEAR(position_stats(a).std, gaussian_width_at(0.5, {2.0, 2.0, 1.0}), 1e-8);
}

TEST(FreePropagate, GridTooSmallForTheFlight) {
    EXPECT_THROW(free_propagate(packet(kW0, {256, -5.0, 5.0}), {10.0, 1.0, 1.0}), TailLeak);
}

TEST(FreePropagate, NegativeTimeRejected) {
    EXPECT_THROW(free_propagate(packet(kW0, {256, -5.0, 5.0}), {-1.0, 1.0, 1.0}), ValidationError);
}

TEST(FreePropagate, NarrowStateOvertakesWideOne) {
    const double a = 0.2;
    const double b = 0.8;
    const double crossing = 2.0 * a * b;  // hbar t / 2m = a b
    EXPECT_LT(gaussian_width_at(a, {0.5 * crossing, 1.0, 1.0}), gaussian_width_at(b, {0.5 * crossing, 1.0, 1.0}));
    EXPECT_GT(gaussian_width_at(a, {2.0 * crossing, 1.0, 1.0}), gaussian_width_at(b, {2.0 * crossing, 1.0, 1.0}));
    const auto fa = free_propagate(packet(a), {2.0 * crossing, 1.0, 1.0});
    const auto fb = free_propagate(packet(b), {2.0 * crossing, 1.0, 1.0});
    EXPECT_GT(position_stats(fa).std, position_stats(fb).std);
}

TEST(PropagateParticle, MarginalMatchesFreeSpreadingOfTheMarginal) {
    const PhysicalParams p{1.0, 2.0, 1.0, 1.0};
    const double t = 1.5;
    const auto g = auto_grid(p, std::nullopt, t, 512);
    const auto psi = build_joint_state({p, g, g});
    const auto moved = propagate_particle(psi, Particle::two, evolution_params(p, t));
    EXPECT_NEAR(position_stats(moved, Particle::two).std / evolved_marginal_width(p, t), 1.0, 1e-8);
    EXPECT_NEAR(position_stats(moved, Particle::one).std, position_stats(psi, Particle::one).std, 1e-12);
    const auto moved1 = propagate_particle(psi, Particle::one, evolution_params(p, t));
    EXPECT_NEAR(position_stats(moved1, Particle::one).std / evolved_marginal_width(p, t), 1.0, 1e-8);
}
