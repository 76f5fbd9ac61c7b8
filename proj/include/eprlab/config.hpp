#pragma once

// Scenario configuration, its validation, and automatic grid sizing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/detector.hpp"
#include "eprlab/error.hpp"
#include "eprlab/evolution.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/params.hpp"

namespace eprlab {

/// Grids must reach this many spreads from zero on each side.
inline constexpr double kMinExtentInSpreads = 6.0;
/// auto_grid places the edges this many spreads out (|psi| ~ 1e-7 there).
inline constexpr double kAutoExtentInSpreads = 8.0;
/// Preferred number of points per smallest feature.
inline constexpr double kPreferredPointsPerFeature = 8.0;
inline constexpr std::size_t kMinGridPoints = 64;
inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 14;

struct ScenarioConfig {
    PhysicalParams params{};
    std::optional<GridSpec> grid;  // empty: sized by auto_grid
    std::optional<MeasurementSpec> measurement;
    double evolution_time = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    DetectorGeometry detector{};
};

struct ValidationReport {
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string message() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i];
        return os.str();
    }
};

namespace detail {

// Widest spread any state of the scenario reaches on the grid.
inline double widest_scale(const PhysicalParams& p, const std::optional<MeasurementSpec>& ms, double t) {
    const auto ev = evolution_params(p, t);
    double wide = std::max(initial_spreads(p).dy2, evolved_marginal_width(p, t));
    if (ms) {
        wide = std::max({wide, ms->epsilon, gaussian_width_at(reduced_width(p, ms->epsilon), ev)});
    }
    return wide;
}

// Coarsest spacing that still resolves every feature with one point per spread.
inline double resolution_floor(const PhysicalParams& p, const std::optional<MeasurementSpec>& ms) {
    double floor = conditional_width(p);
    if (ms) floor = std::min(floor, ms->epsilon);
    return floor;
}

// Spacing that gives kPreferredPointsPerFeature points across the smallest scale.
inline double preferred_spacing(const PhysicalParams& p, const std::optional<MeasurementSpec>& ms) {
    double narrow = std::min(p.hbar / (4.0 * p.sigma), p.omega0);
    if (ms) narrow = std::min(narrow, ms->epsilon);
    return narrow / kPreferredPointsPerFeature;
}

inline std::size_t points_for_spacing(double extent, double dy) {
    const double needed = std::ceil(extent / dy) + 1.0;
    if (!(needed < 1e18)) return std::numeric_limits<std::size_t>::max();
    return std::max(kMinGridPoints, next_power_of_two(static_cast<std::size_t>(needed)));
}

inline void validate_params(const PhysicalParams& p, std::vector<std::string>& out) {
    if (!is_positive_finite(p.sigma)) out.emplace_back("sigma must be positive and finite");
    if (!is_positive_finite(p.omega0)) out.emplace_back("omega0 must be positive and finite");
    if (!is_positive_finite(p.hbar)) out.emplace_back("hbar must be positive and finite");
    if (!is_positive_finite(p.mass)) out.emplace_back("mass must be positive and finite");
}

}  // namespace detail

/// Checks a single grid axis against the scales of the scenario. Appends one
/// message per violated invariant.
inline void validate_grid(const PhysicalParams& p, const GridSpec& g, const std::optional<MeasurementSpec>& ms,
                          double t, std::vector<std::string>& out) {
    if (g.n_points < kMinGridPoints || !is_power_of_two(g.n_points)) {
        out.emplace_back("n_points must be a power of two >= 64");
        return;
    }
    if (!std::isfinite(g.y_min) || !std::isfinite(g.y_max) || !(g.y_max > g.y_min)) {
        out.emplace_back("grid requires finite y_min < y_max");
        return;
    }
    const double dy0 = initial_spreads(p).dy2;
    if (g.half_extent() < kMinExtentInSpreads * dy0) {
        out.emplace_back("extent < 6·Δy: grid reaches " + std::to_string(g.half_extent()) +
                         " from zero but the initial position spread is " + std::to_string(dy0));
    }
    const double wide = detail::widest_scale(p, ms, t);
    if (wide > dy0 && g.half_extent() < kMinExtentInSpreads * wide) {
        out.emplace_back("extent < 6·(post-measurement/post-evolution width): need " +
                         std::to_string(kMinExtentInSpreads * wide) + " on each side");
    }
    if (ms && std::fmin(ms->center - g.y_min, g.y_max - ms->center) < kMinExtentInSpreads * ms->epsilon) {
        out.emplace_back("pointer does not fit: need 6·epsilon on both sides of its centre");
    }
    const double floor = detail::resolution_floor(p, ms);
    if (g.dy() > floor) {
        out.emplace_back("grid spacing " + std::to_string(g.dy()) + " exceeds the smallest feature " +
                         std::to_string(floor));
    }
}

inline ValidationReport validate(const ScenarioConfig& c) {
    ValidationReport r;
    detail::validate_params(c.params, r.violations);
    if (c.measurement) {
        if (!(c.measurement->epsilon > 0.0) || !std::isfinite(c.measurement->epsilon))
            r.violations.emplace_back("epsilon must be > 0");
        if (!std::isfinite(c.measurement->center)) r.violations.emplace_back("measurement center must be finite");
    }
    if (!std::isfinite(c.evolution_time) || c.evolution_time < 0.0)
        r.violations.emplace_back("evolution_time must be finite and >= 0");
    if (c.detector.n_bins < 8) r.violations.emplace_back("detector needs n_bins >= 8");
    if (!std::isfinite(c.detector.y_lo) || !std::isfinite(c.detector.y_hi) || !(c.detector.y_hi > c.detector.y_lo))
        r.violations.emplace_back("detector y_range must satisfy lo < hi");
    // Scale checks are meaningless once the parameters themselves are broken.
    if (!r.ok()) return r;
    if (c.grid) validate_grid(c.params, *c.grid, c.measurement, c.evolution_time, r.violations);
    return r;
}

/// Smallest symmetric grid that holds every state of the scenario.
///
/// The edges sit 8 spreads from zero (plus any pointer offset). The spacing
/// aims for 8 points across min(eps, hbar/4sigma, omega0); when that would
/// need more than `cap` points the grid is clamped to `cap`, provided one
/// point per spread of the narrowest feature still fits. Otherwise throws
/// CapExceeded.
inline GridSpec auto_grid(const PhysicalParams& p, const std::optional<MeasurementSpec>& ms, double t,
                          std::size_t cap = kDefaultGridCap) {
    std::vector<std::string> bad;
    detail::validate_params(p, bad);
    if (ms && !is_positive_finite(ms->epsilon)) bad.emplace_back("epsilon must be > 0");
    if (!bad.empty()) throw ValidationError(bad.front());

    const double offset = ms ? std::fabs(ms->center) : 0.0;
    const double half = kAutoExtentInSpreads * detail::widest_scale(p, ms, t) + offset;
    const std::size_t n_floor = detail::points_for_spacing(2.0 * half, detail::resolution_floor(p, ms));
    if (n_floor > cap) {
        throw CapExceeded("scale ratio needs " + std::to_string(n_floor) + " grid points; cap is " +
                          std::to_string(cap));
    }
    const std::size_t n = std::min(cap, detail::points_for_spacing(2.0 * half, detail::preferred_spacing(p, ms)));
    return {n, -half, half};
}

}  // namespace eprlab
