#pragma once

// One run of the two-slit coincidence experiment: build the pair, optionally
// detect particle 1 behind slit A, fly the particles to the detector plane,
// sample hits and compare analytic, grid and sampled spreads.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/config.hpp"
#include "eprlab/error.hpp"
#include "eprlab/evolution.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/sampling.hpp"
#include "eprlab/state.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

/// Grid size used when a scenario leaves the grid to auto_grid. The joint
/// state holds n^2 amplitudes (268 MB at this cap), so this is tighter than
/// the 1-D cap.
inline constexpr std::size_t kScenarioGridCap = 4096;

struct AnalyticSpreads {
    InitialSpreads initial{};
    std::optional<ReducedStateClosedForm> reduced;
    std::optional<StrongCorrelationApprox> strong_correlation;
    double reduced_mean = 0.0;
    double dp2_sharp_limit = 0.0;
    double position_correlation = 0.0;
    bool disentangled = false;
    double detector_width_measured = 0.0;    // reduced Gaussian after time t
    double detector_width_unmeasured = 0.0;  // particle-2 marginal after time t
};

struct NumericSpreads {
    GridSpec grid1{};
    GridSpec grid2{};
    Moments position1{};
    Moments position2{};
    double dp1 = 0.0;
    double dp2 = 0.0;
    double dp2_derivative = 0.0;
    double position_correlation = 0.0;
    double detector_std_unmeasured = 0.0;
    // Present only with a measurement.
    std::optional<double> reduced_dy2;
    std::optional<double> reduced_dp2;
    std::optional<double> reduced_mean;
    std::optional<double> reduced_residual;
    std::optional<double> dp2_ratio;  // reduced / initial
    std::optional<double> detector_std_measured;
    std::optional<double> detector_spread_ratio;  // measured / unmeasured at the detector plane
};

struct SampledSpreads {
    DetectorSide side = DetectorSide::B;
    std::uint64_t n = 0;
    Moments position{};
    double ks = 0.0;
    DetectorHistogram histogram{};
    double joint_correlation = 0.0;
};

struct ContractCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool ok = true;
};

struct ScenarioArtifacts {
    WaveFunction2D joint;
    std::optional<WaveFunction1D> pointer;
    std::optional<WaveFunction1D> reduced;
    std::optional<WaveFunction1D> reduced_at_detector;
};

struct ScenarioReport {
    ScenarioConfig config{};
    AnalyticSpreads analytic{};
    NumericSpreads numeric{};
    SampledSpreads sampled{};
    std::vector<ContractCheck> contracts;
    std::uint64_t seed = 0;
    std::map<std::string, double> timings_ms;
    ScenarioArtifacts artifacts;

    [[nodiscard]] bool contracts_hold() const {
        for (const auto& c : contracts)
            if (!c.ok) return false;
        return true;
    }
};

namespace detail {

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
    void mark(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        sink_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

private:
    std::map<std::string, double>& sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

inline ContractCheck at_most(std::string name, double value, double tol) {
    return {std::move(name), value, tol, value <= tol};
}

}  // namespace detail

/// Stream indices for derive_seed, fixed so reports are reproducible.
enum class SampleStream : std::uint64_t { detector = 0, joint = 1 };

inline AnalyticSpreads analytic_spreads(const ScenarioConfig& c) {
    const auto& p = c.params;
    const auto ev = evolution_params(p, c.evolution_time);
    AnalyticSpreads a;
    a.initial = initial_spreads(p);
    a.dp2_sharp_limit = limit_dp2_eps_to_zero(p);
    a.position_correlation = position_correlation(p);
    a.disentangled = is_disentangled(p, 1e-12);
    a.detector_width_unmeasured = evolved_marginal_width(p, c.evolution_time);
    if (c.measurement) {
        a.reduced = reduced_spreads(p, c.measurement->epsilon);
        a.strong_correlation = approx_dp2_strong_correlation(p, c.measurement->epsilon);
        a.reduced_mean = reduced_mean(p, *c.measurement);
        a.detector_width_measured = gaussian_width_at(a.reduced->dy2, ev);
    }
    return a;
}

/// Runs one scenario. Throws ValidationError for bad input and
/// NumericalError when a numerical routine refuses; contract checks that
/// merely miss their tolerance are recorded in the report.
inline ScenarioReport run_scenario(const ScenarioConfig& config) {
    const auto report = validate(config);
    if (!report.ok()) throw ValidationError(report.message());

    ScenarioReport r;
    r.config = config;
    r.seed = config.seed;
    detail::StageTimer timer(r.timings_ms);

    const auto& p = config.params;
    const auto ev = evolution_params(p, config.evolution_time);
    const GridSpec grid =
        config.grid ? *config.grid : auto_grid(p, config.measurement, config.evolution_time, kScenarioGridCap);
    if (!config.grid) {
        std::vector<std::string> bad;
        validate_grid(p, grid, config.measurement, config.evolution_time, bad);
        if (!bad.empty()) throw ValidationError(bad.front());
    }
    r.analytic = analytic_spreads(config);
    timer.mark("setup");

    auto psi = build_joint_state({p, grid, grid});
    timer.mark("build");

    auto& num = r.numeric;
    num.grid1 = grid;
    num.grid2 = grid;
    num.position1 = position_stats(psi, Particle::one);
    num.position2 = position_stats(psi, Particle::two);
    num.dp1 = momentum_std_spectral(psi, Particle::one, p.hbar);
    num.dp2 = momentum_std_spectral(psi, Particle::two, p.hbar);
    num.dp2_derivative = momentum_std_derivative(psi, Particle::two, p.hbar);
    num.position_correlation = position_correlation_numeric(psi);
    r.contracts.push_back(detail::at_most("initial_dy2_rel_err", detail::rel_diff(num.position2.std, r.analytic.initial.dy2), 1e-6));
    r.contracts.push_back(detail::at_most("initial_dp2_rel_err", detail::rel_diff(num.dp2, r.analytic.initial.dp2y), 1e-6));
    timer.mark("initial_moments");

    // No-measurement branch: particle 2 flies freely while still entangled.
    const Particle observed = config.detector.side == DetectorSide::A ? Particle::one : Particle::two;
    const auto unmeasured_density = marginal_density(propagate_particle(psi, observed, ev), observed);
    num.detector_std_unmeasured = density_moments(grid, unmeasured_density).std;
    timer.mark("propagate_unmeasured");

    std::optional<WaveFunction1D> detector_state;
    if (config.measurement) {
        const auto& ms = *config.measurement;
        auto phi1 = build_pointer_state(ms, grid);
        auto red = conditional_reduce(psi, phi1, p, ms);
        num.reduced_dy2 = red.dy2_numeric;
        num.reduced_dp2 = red.dp2_numeric;
        num.reduced_mean = red.mean_numeric;
        num.reduced_residual = red.residual;
        num.dp2_ratio = red.dp2_numeric / num.dp2;
        r.contracts.push_back(detail::at_most("reduced_dy2_rel_err", detail::rel_diff(red.dy2_numeric, red.dy2_closed), 1e-6));
        r.contracts.push_back(detail::at_most("reduced_dp2_rel_err", detail::rel_diff(red.dp2_numeric, red.dp2_closed), 1e-6));
        r.contracts.push_back(detail::at_most("reduced_residual", red.residual, 1e-8));
        r.contracts.push_back(detail::at_most("no_extra_spread", red.dp2_numeric - num.dp2, 1e-8));

        auto phi2_t = free_propagate(red.phi2, ev);
        r.contracts.push_back(detail::at_most("propagated_norm_err", std::fabs(l2_norm(phi2_t) - 1.0), 1e-10));
        r.contracts.push_back(detail::at_most(
            "propagated_dp2_rel_err",
            detail::rel_diff(momentum_std_spectral(phi2_t, p.hbar), red.dp2_numeric), 1e-10));
        const double measured_std = position_stats(phi2_t).std;
        num.detector_std_measured = measured_std;
        num.detector_spread_ratio = measured_std / num.detector_std_unmeasured;

        // Behind slit A the detector absorbs particle 1 where the pointer put it.
        detector_state = observed == Particle::one ? phi1 : phi2_t;
        r.artifacts.pointer = std::move(phi1);
        r.artifacts.reduced = std::move(red.phi2);
        r.artifacts.reduced_at_detector = std::move(phi2_t);
        timer.mark("measurement");
    }

    auto& s = r.sampled;
    s.side = config.detector.side;
    s.n = config.n_samples;
    const auto detector_seed = derive_seed(config.seed, static_cast<std::uint64_t>(SampleStream::detector));
    std::vector<double> hits;
    std::optional<InverseCdfSampler> reference;
    if (detector_state) {
        hits = sample_positions(*detector_state, config.n_samples, detector_seed);
        reference.emplace(detector_state->grid(), density(*detector_state));
    } else {
        hits = sample_density(grid, unmeasured_density, config.n_samples, detector_seed);
        reference.emplace(grid, unmeasured_density);
    }
    s.position = sample_moments(hits);
    s.ks = hits.empty() ? 0.0 : ks_statistic(hits, [&](double y) { return reference->cdf(y); });
    s.histogram = histogram(hits, config.detector);
    const auto pairs =
        sample_joint(psi, config.n_samples, derive_seed(config.seed, static_cast<std::uint64_t>(SampleStream::joint)));
    s.joint_correlation = pairs.size() > 1 ? sample_correlation(pairs) : 0.0;
    timer.mark("sampling");

    r.artifacts.joint = std::move(psi);
    return r;
}

}  // namespace eprlab
