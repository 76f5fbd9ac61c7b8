#pragma once

// Builders for the entangled pair and the Gaussian pointer state.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eprlab/config.hpp"
#include "eprlab/error.hpp"
#include "eprlab/params.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

struct JointStateRecipe {
    PhysicalParams params{};
    GridSpec grid1{};
    GridSpec grid2{};
};

/// Unnormalized pair amplitude with the momentum integral already done:
/// exp(-(y1 - y2)^2 sigma^2 / hbar^2) * exp(-(y1 + y2)^2 / (16 omega0^2)).
inline double joint_amplitude(const PhysicalParams& p, double y1, double y2) {
    const double rel = y1 - y2;
    const double com = y1 + y2;
    return std::exp(-rel * rel * p.sigma * p.sigma / (p.hbar * p.hbar) - com * com / (16.0 * p.omega0 * p.omega0));
}

inline WaveFunction2D build_joint_state(const JointStateRecipe& recipe) {
    std::vector<std::string> bad;
    detail::validate_params(recipe.params, bad);
    if (bad.empty()) {
        validate_grid(recipe.params, recipe.grid1, std::nullopt, 0.0, bad);
        validate_grid(recipe.params, recipe.grid2, std::nullopt, 0.0, bad);
    }
    if (!bad.empty()) throw ValidationError("joint state: " + bad.front());

    const auto& g1 = recipe.grid1;
    const auto& g2 = recipe.grid2;
    std::vector<cplx> amps(g1.n_points * g2.n_points);
    for (std::size_t i = 0; i < g1.n_points; ++i) {
        const double y1 = g1.y(i);
        for (std::size_t j = 0; j < g2.n_points; ++j) amps[i * g2.n_points + j] = joint_amplitude(recipe.params, y1, g2.y(j));
    }
    return normalize(WaveFunction2D(g1, g2, std::move(amps)));
}

/// Gaussian pointer exp(-(y - center)^2 / (4 eps^2)), normalized on the grid.
/// Requires at least one grid point per eps.
inline WaveFunction1D build_pointer_state(const MeasurementSpec& ms, const GridSpec& grid) {
    if (!is_positive_finite(ms.epsilon)) throw ValidationError("epsilon must be > 0");
    if (grid.n_points < 2 || !(grid.y_max > grid.y_min)) throw ValidationError("pointer grid is empty");
    if (grid.dy() > ms.epsilon) {
        throw UnderResolved("pointer width " + std::to_string(ms.epsilon) + " is below the grid spacing " +
                            std::to_string(grid.dy()));
    }
    std::vector<cplx> amps(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double d = grid.y(i) - ms.center;
        amps[i] = std::exp(-d * d / (4.0 * ms.epsilon * ms.epsilon));
    }
    return normalize(WaveFunction1D(grid, std::move(amps)));
}

/// How a hard-edged slit of full width w maps onto a Gaussian pointer width.
enum class TophatMapping {
    moment_matching,  // eps = w / sqrt(12), equal position variance
    half_width,       // eps = w / 2
};

inline double pointer_width_for_tophat(double width, TophatMapping mapping = TophatMapping::moment_matching) {
    return mapping == TophatMapping::moment_matching ? width / std::sqrt(12.0) : 0.5 * width;
}

}  // namespace eprlab
