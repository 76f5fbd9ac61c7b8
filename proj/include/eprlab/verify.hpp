#pragma once

// The verification suite: every closed form checked against the grid oracle,
// plus the sampling, evolution and convergence checks. Shared by the
// `verify` subcommand and the acceptance test binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "eprlab/analytic.hpp"
#include "eprlab/config.hpp"
#include "eprlab/evolution.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/sampling.hpp"
#include "eprlab/state.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

enum class VerifyLevel { quick, full };

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::quick;
    std::uint64_t seed = 0x5eed2005ULL;
    // Relative error injected into the closed-form reduced momentum spread.
    // Zero in normal use; the test suite sets it to prove the checks bite.
    double formula_perturbation = 0.0;
};

struct CheckResult {
    int criterion = 0;
    std::string name;
    std::string expected;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifySummary {
    VerifyLevel level = VerifyLevel::quick;
    std::vector<CheckResult> checks;
    double elapsed_s = 0.0;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }
    [[nodiscard]] bool criterion_passes(int id) const {
        bool any = false;
        for (const auto& c : checks) {
            if (c.criterion != id) continue;
            any = true;
            if (!c.pass) return false;
        }
        return any;
    }
};

/// Sizes of one verification level.
struct VerifyPlan {
    std::size_t grid_cap = 512;
    std::size_t sweep_triples = 20;
    double sweep_lo = 0.5;
    double sweep_hi = 2.0;
    std::size_t spread_pairs = 5;
    std::size_t schmidt_cap = 512;
    std::size_t convergence_base_cap = 256;
    double time_budget_s = 60.0;
};

inline VerifyPlan verify_plan(VerifyLevel level) {
    if (level == VerifyLevel::quick) return {};
    VerifyPlan p;
    p.grid_cap = 4096;
    p.sweep_triples = 100;
    p.sweep_lo = 0.1;
    p.sweep_hi = 10.0;
    p.spread_pairs = 20;
    p.schmidt_cap = 512;
    p.convergence_base_cap = 2048;
    p.time_budget_s = 600.0;
    return p;
}

namespace detail {

inline double rel_err(double actual, double expected) { return std::fabs(actual - expected) / std::fabs(expected); }

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

class Checks {
public:
    explicit Checks(std::vector<CheckResult>& out) : out_(out) {}

    void at_most(int id, std::string name, double actual, double tol, std::string expected = "0") {
        out_.push_back({id, std::move(name), std::move(expected), actual, tol, actual <= tol});
    }
    void close(int id, std::string name, double actual, double expected, double tol) {
        out_.push_back({id, std::move(name), fmt(expected), actual, tol, rel_err(actual, expected) <= tol});
    }
    void abs_close(int id, std::string name, double actual, double expected, double tol) {
        out_.push_back({id, std::move(name), fmt(expected), actual, tol, std::fabs(actual - expected) <= tol});
    }
    void positive(int id, std::string name, double actual) {
        out_.push_back({id, std::move(name), "> 0", actual, 0.0, actual > 0.0});
    }
    void failed(int id, std::string name, const std::string& why) {
        out_.push_back({id, std::move(name), why, std::nan(""), 0.0, false});
    }

private:
    std::vector<CheckResult>& out_;
};

struct Reduction {
    PhysicalParams params{};
    MeasurementSpec ms{};
    ReductionResult result;
    double dp2_initial_numeric = 0.0;
};

// Joint state on separately sized axes: y1 must resolve the pointer, y2 only
// the joint state and the reduced Gaussian.
inline Reduction reduce_on_auto_grids(const PhysicalParams& p, const MeasurementSpec& ms, std::size_t cap1,
                                      std::size_t cap2, double t = 0.0, bool initial_momentum = false) {
    const auto g1 = auto_grid(p, ms, t, cap1);
    const auto g2 = auto_grid(p, std::nullopt, t, cap2);
    const auto psi = build_joint_state({p, g1, g2});
    Reduction r{p, ms, conditional_reduce(psi, build_pointer_state(ms, g1), p, ms), 0.0};
    if (initial_momentum) r.dp2_initial_numeric = momentum_std_spectral(psi, Particle::two, p.hbar);
    return r;
}

inline double log_uniform(Xoshiro256& rng, double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

}  // namespace detail

inline VerifySummary run_verification(const VerifyOptions& opt) {
    using detail::rel_err;
    const auto start = std::chrono::steady_clock::now();
    const auto plan = verify_plan(opt.level);
    VerifySummary summary;
    summary.level = opt.level;
    detail::Checks check(summary.checks);

    auto closed_dp2 = [&](const PhysicalParams& p, double eps) {
        return reduced_spreads(p, eps).dp2y * (1.0 + opt.formula_perturbation);
    };
    auto guarded = [&](int id, const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check.failed(id, name, std::string("threw: ") + e.what());
        }
    };

    // 1, 3, 7: seeded random sweep of (sigma, omega0, eps).
    guarded(1, "random sweep", [&] {
        Xoshiro256 rng(opt.seed);
        double worst_dy = 0.0, worst_dp = 0.0;
        double worst_excess_num = -1e300, worst_excess_closed = -1e300, min_gap_closed = 1e300;
        double worst_product_closed = 0.0, worst_product_num = 0.0;
        for (std::size_t k = 0; k < plan.sweep_triples; ++k) {
            const PhysicalParams p{detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi),
                                   detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi), 1.0, 1.0};
            const MeasurementSpec ms{detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi), 0.0};
            const auto red = detail::reduce_on_auto_grids(p, ms, plan.grid_cap, plan.grid_cap).result;
            const double dp_closed = closed_dp2(p, ms.epsilon);
            const double dp_initial = initial_spreads(p).dp2y;
            worst_dy = std::max(worst_dy, rel_err(red.dy2_numeric, red.dy2_closed));
            worst_dp = std::max(worst_dp, rel_err(red.dp2_numeric, dp_closed));
            worst_excess_num = std::max(worst_excess_num, red.dp2_numeric - dp_initial);
            worst_excess_closed = std::max(worst_excess_closed, dp_closed - dp_initial);
            min_gap_closed = std::min(min_gap_closed, dp_initial - dp_closed);
            worst_product_closed = std::max(worst_product_closed, std::fabs(red.dy2_closed * dp_closed - 0.5 * p.hbar));
            worst_product_num =
                std::max(worst_product_num, rel_err(red.dy2_numeric * red.dp2_numeric, 0.5 * p.hbar));
        }
        check.at_most(1, "sweep max rel err dy2 numeric vs closed", worst_dy, 1e-6);
        check.at_most(1, "sweep max rel err dp2 numeric vs closed", worst_dp, 1e-6);
        check.at_most(3, "sweep max dp2(post, numeric) - dp2(initial)", worst_excess_num, 1e-8);
        check.at_most(3, "sweep max dp2(post, closed) - dp2(initial)", worst_excess_closed, 1e-8);
        check.positive(3, "off-line triples: min dp2(initial) - dp2(post) (strict)", min_gap_closed);
        check.at_most(7, "sweep max |dy2*dp2 - hbar/2| closed form", worst_product_closed, 1e-9);
        check.at_most(7, "sweep max rel err dy2*dp2 vs hbar/2 on grid", worst_product_num, 1e-6);
    });

    // 3: equality exactly on the disentangling line omega0 = hbar/(4 sigma).
    guarded(3, "disentangled line", [&] {
        Xoshiro256 rng(opt.seed ^ 0x3ULL);
        double worst_closed = 0.0, worst_num = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            PhysicalParams p{detail::log_uniform(rng, 0.5, 2.0), 1.0, 1.0, 1.0};
            p.omega0 = disentangling_omega0(p);
            const MeasurementSpec ms{detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi), 0.0};
            const auto red = detail::reduce_on_auto_grids(p, ms, plan.grid_cap, plan.grid_cap, 0.0, true);
            worst_closed = std::max(worst_closed, std::fabs(closed_dp2(p, ms.epsilon) - initial_spreads(p).dp2y));
            worst_num = std::max(worst_num, std::fabs(red.result.dp2_numeric - red.dp2_initial_numeric));
        }
        check.at_most(3, "on-line |dp2(post) - dp2(initial)| closed form", worst_closed, 1e-9);
        check.at_most(3, "on-line |dp2(post) - dp2(initial)| on grid", worst_num, 1e-9);
    });

    // 2: initial spreads of the pair.
    guarded(2, "initial spreads", [&] {
        Xoshiro256 rng(opt.seed ^ 0x2ULL);
        double worst_dp = 0.0, worst_dy = 0.0;
        for (std::size_t k = 0; k < plan.spread_pairs; ++k) {
            const PhysicalParams p{detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi),
                                   detail::log_uniform(rng, plan.sweep_lo, plan.sweep_hi), 1.0, 1.0};
            const auto g = auto_grid(p, std::nullopt, 0.0, plan.grid_cap);
            const auto psi = build_joint_state({p, g, g});
            const auto expect = initial_spreads(p);
            worst_dp = std::max(worst_dp, rel_err(momentum_std_spectral(psi, Particle::two, p.hbar), expect.dp2y));
            worst_dy = std::max(worst_dy, rel_err(position_stats(psi, Particle::two).std, expect.dy2));
        }
        check.at_most(2, "max rel err dp2 grid vs sqrt(sigma^2 + hbar^2/16 omega0^2)", worst_dp, 1e-6);
        check.at_most(2, "max rel err dy2 grid vs sqrt(omega0^2 + hbar^2/16 sigma^2)", worst_dy, 1e-6);
    });

    // 4: minimum-uncertainty fixed point.
    guarded(4, "minimum-uncertainty fixed point", [&] {
        const PhysicalParams p{1.0, 0.25, 1.0, 1.0};
        check.abs_close(4, "initial dp2 = sqrt(2) sigma", initial_spreads(p).dp2y, std::numbers::sqrt2, 1e-9);
        for (double eps : {0.1, 0.5, 2.0}) {
            check.abs_close(4, "reduced dp2 = sqrt(2) sigma, eps=" + detail::fmt(eps), closed_dp2(p, eps),
                            std::numbers::sqrt2, 1e-9);
            check.abs_close(4, "reduced dy2 = hbar/(2 sqrt2 sigma), eps=" + detail::fmt(eps),
                            reduced_spreads(p, eps).dy2, 1.0 / (2.0 * std::numbers::sqrt2), 1e-9);
        }
        const auto gs = auto_grid(p, std::nullopt, 0.0, plan.schmidt_cap);
        check.at_most(4, "Schmidt entropy of the pair", schmidt(build_joint_state({p, gs, gs})).entropy, 1e-6);

        const MeasurementSpec ms{0.1, 0.0};
        const auto g1 = auto_grid(p, ms, 0.0, plan.grid_cap);
        const auto g2 = auto_grid(p, std::nullopt, 0.0, plan.grid_cap);
        const auto psi = build_joint_state({p, g1, g2});
        const auto red = conditional_reduce(psi, build_pointer_state(ms, g1), p, ms);
        const auto marginal = marginal_density(psi, Particle::two);
        double worst = 0.0;
        for (std::size_t j = 0; j < marginal.size(); ++j)
            worst = std::max(worst, std::fabs(std::abs(red.phi2[j]) - std::sqrt(marginal[j])));
        check.at_most(4, "max |phi2 - initial marginal amplitude|", worst, 1e-8);
    });

    // 5: sharp-pointer limit.
    guarded(5, "sharp pointer limit", [&] {
        const PhysicalParams p{1.0, 2.0, 1.0, 1.0};
        const double limit = limit_dp2_eps_to_zero(p);
        const auto fine = detail::reduce_on_auto_grids(p, {1e-3, 0.0}, std::size_t{1} << 15, 512).result;
        const auto coarse = detail::reduce_on_auto_grids(p, {1e-2, 0.0}, std::size_t{1} << 15, 512).result;
        check.close(5, "dp2 at eps=1e-3 vs sqrt(sigma^2 + hbar^2/16 omega0^2)", fine.dp2_numeric, limit, 1e-5);
        // dp2 - limit is O(eps^2): one Richardson step removes it.
        const double extrapolated = (100.0 * fine.dp2_numeric - coarse.dp2_numeric) / 99.0;
        check.close(5, "Richardson extrapolation from eps in {1e-2, 1e-3}", extrapolated, limit, 1e-8);
        check.close(5, "closed-form dp2 at eps=1e-3 vs limit", closed_dp2(p, 1e-3), limit, 1e-5);
    });

    // 6: strong-correlation regime.
    guarded(6, "strong-correlation regime", [&] {
        const PhysicalParams p{10.0, 10.0, 1.0, 1.0};
        const auto approx = approx_dp2_strong_correlation(p, 0.1);
        check.abs_close(6, "approximate dp2 at eps=0.1", approx.value, 4.472136, 5e-7);
        check.close(6, "approximate vs exact dp2 at eps=0.1", approx.value, closed_dp2(p, 0.1), 1e-3);
        check.at_most(6, "regime flag set (0 = yes)", approx.regime_ok ? 0.0 : 1.0, 0.0);
        double prev = 0.0, min_step = 1e300;
        for (double eps : {0.2, 0.1, 0.05}) {
            const auto red = detail::reduce_on_auto_grids(p, {eps, 0.0}, 4096, 4096).result;
            if (prev > 0.0) min_step = std::min(min_step, red.dp2_numeric - prev);
            prev = red.dp2_numeric;
        }
        check.positive(6, "dp2 on grid strictly increases as eps halves 0.2 -> 0.05", min_step);
    });

    // 8: free evolution of the reduced state.
    guarded(8, "evolution", [&] {
        const PhysicalParams p{1.0, 0.25, 1.0, 1.0};
        const MeasurementSpec ms{0.5, 0.0};
        const auto red = detail::reduce_on_auto_grids(p, ms, plan.grid_cap, plan.grid_cap, 2.0).result;
        const double w0 = red.dy2_closed;
        const double dp0 = momentum_std_spectral(red.phi2, p.hbar);
        double worst_width = 0.0, worst_dp = 0.0;
        for (double t : {0.5, 1.0, 2.0}) {
            const auto ev = evolution_params(p, t);
            const auto moved = free_propagate(red.phi2, ev);
            worst_width = std::max(worst_width, rel_err(position_stats(moved).std, gaussian_width_at(w0, ev)));
            worst_dp = std::max(worst_dp, rel_err(momentum_std_spectral(moved, p.hbar), dp0));
        }
        check.close(8, "reduced width w0", w0, 1.0 / (2.0 * std::numbers::sqrt2), 1e-7);
        check.at_most(8, "max rel err propagated width vs Gaussian spreading", worst_width, 1e-4);
        check.at_most(8, "max rel change of momentum spread under propagation", worst_dp, 1e-10);
    });

    // 9: sampling statistics.
    guarded(9, "sampling", [&] {
        const PhysicalParams p{1.0, 2.0, 1.0, 1.0};
        const MeasurementSpec ms{0.5, 0.0};
        const auto red = detail::reduce_on_auto_grids(p, ms, plan.grid_cap, plan.grid_cap).result;
        const double s = position_stats(red.phi2).std;
        const std::uint64_t n = 100000;
        const auto xs = sample_positions(red.phi2, n, opt.seed);
        check.close(9, "sample std vs grid std, n=1e5", sample_moments(xs).std, s, 0.01);
        for (std::uint64_t m : {std::uint64_t{10000}, n}) {
            const auto ys = sample_positions(red.phi2, m, derive_seed(opt.seed, m));
            check.close(9, "CLT bound on sample std, n=" + std::to_string(m), sample_moments(ys).std, s,
                        3.0 * std::sqrt(2.0 / static_cast<double>(m)));
        }

        // Bin probabilities from the closed-form Gaussian, independent of the sampler.
        const DetectorGeometry geom{50, -5.0 * s, 5.0 * s, DetectorSide::B};
        const auto h = histogram(xs, geom);
        const double w = red.dy2_closed;
        auto gauss_cdf = [&](double y) { return 0.5 * (1.0 + std::erf(y / (std::numbers::sqrt2 * w))); };
        std::vector<double> prob(geom.n_bins);
        for (std::size_t b = 0; b < geom.n_bins; ++b) prob[b] = gauss_cdf(h.bin_hi(b)) - gauss_cdf(h.bin_lo(b));
        const auto chi = chi_square(h, prob);
        const boost::math::chi_squared dist(static_cast<double>(chi.dof));
        const double critical = boost::math::quantile(dist, 0.999);
        check.at_most(9, "chi-square of 50-bin histogram (dof " + std::to_string(chi.dof) + ")", chi.statistic,
                      critical, "< 0.999 quantile");

        const auto g = auto_grid(p, std::nullopt, 0.0, plan.grid_cap);
        const auto pairs = sample_joint(build_joint_state({p, g, g}), n, derive_seed(opt.seed, 99));
        check.abs_close(9, "joint sample correlation vs (O^2 - q)/(O^2 + q)", sample_correlation(pairs),
                        position_correlation(p), 0.01);
    });

    // 10: grid convergence and cross-method agreement.
    guarded(10, "convergence", [&] {
        const PhysicalParams p{1.0, 2.0, 1.0, 1.0};
        const MeasurementSpec ms{0.5, 0.0};
        auto spreads = [&](std::size_t n) {
            auto g = auto_grid(p, ms, 0.0, plan.convergence_base_cap);
            g.n_points = n;
            const auto psi = build_joint_state({p, g, g});
            const auto red = conditional_reduce(psi, build_pointer_state(ms, g), p, ms);
            return std::vector<double>{position_stats(psi, Particle::two).std,
                                       momentum_std_spectral(psi, Particle::two, p.hbar), red.dy2_numeric,
                                       red.dp2_numeric};
        };
        const std::size_t n = auto_grid(p, ms, 0.0, plan.convergence_base_cap).n_points;
        const auto a = spreads(n);
        const auto b = spreads(2 * n);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, rel_err(b[k], a[k]));
        check.at_most(10, "max rel change of spreads when doubling " + std::to_string(n) + " points", worst, 1e-6);

        for (const double omega0 : {2.0, 0.25}) {
            const PhysicalParams q{1.0, omega0, 1.0, 1.0};
            const auto g = auto_grid(q, std::nullopt, 0.0, plan.convergence_base_cap);
            const auto psi = build_joint_state({q, g, g});
            check.close(10, "finite-difference vs spectral dp2, omega0=" + detail::fmt(omega0),
                        momentum_std_derivative(psi, Particle::two, q.hbar),
                        momentum_std_spectral(psi, Particle::two, q.hbar), 1e-4);
        }
    });

    summary.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.at_most(11, std::string("wall time of the ") + (opt.level == VerifyLevel::quick ? "quick" : "full") + " suite (s)",
                  summary.elapsed_s, plan.time_budget_s, "< budget");
    return summary;
}

inline void print_verify_table(std::ostream& os, const VerifySummary& s) {
    char line[512];
    std::snprintf(line, sizeof line, "%-3s %-62s %-18s %-14s %-10s %s\n", "#", "check", "expected", "actual",
                  "tolerance", "result");
    os << line;
    for (const auto& c : s.checks) {
        std::snprintf(line, sizeof line, "%-3d %-62s %-18s %-14.6g %-10.3g %s\n", c.criterion, c.name.c_str(),
                      c.expected.c_str(), c.actual, c.tolerance, c.pass ? "PASS" : "FAIL");
        os << line;
    }
}

}  // namespace eprlab
