#pragma once

// Measurement at slit A. conditional_reduce projects particle 1 onto the
// pointer state that a detector behind the slit leaves it in, and returns the
// conditional state of particle 2. aperture_postselect is the contrasting case
// of a slit with no detector: the pair stays entangled and particle 2 is only
// described by a reduced density matrix.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/error.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/params.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

struct ReductionResult {
    WaveFunction1D phi2;
    double dy2_numeric = 0.0;
    double dy2_closed = 0.0;
    double dp2_numeric = 0.0;
    double dp2_closed = 0.0;
    double mean_numeric = 0.0;
    double mean_closed = 0.0;
    double residual = 0.0;  // max |phi2 - closed form| relative to the peak
};

/// Closed-form reduced Gaussian evaluated on `grid` and normalized there.
inline WaveFunction1D reduced_state_closed_form(const PhysicalParams& p, const MeasurementSpec& ms,
                                                const GridSpec& grid) {
    const double omega = reduced_width(p, ms.epsilon);
    const double mu = reduced_mean(p, ms);
    std::vector<cplx> amps(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double d = grid.y(j) - mu;
        amps[j] = std::exp(-d * d / (4.0 * omega * omega));
    }
    return normalize(WaveFunction1D(grid, std::move(amps)));
}

/// Overlap of the joint state with the pointer along y1, normalized:
/// phi2(y2) = int psi(y1, y2) conj(phi1(y1)) dy1.
inline WaveFunction1D project_particle_one(const WaveFunction2D& psi, const WaveFunction1D& phi1) {
    if (!(psi.grid1() == phi1.grid())) throw GridMismatch("pointer and joint state use different y1 grids");
    const auto w1 = trapezoid_weights(psi.grid1());
    std::vector<cplx> col(psi.rows());
    std::vector<cplx> out(psi.cols());
    for (std::size_t j = 0; j < psi.cols(); ++j) {
        for (std::size_t i = 0; i < psi.rows(); ++i) col[i] = w1[i] * psi.at(i, j) * std::conj(phi1[i]);
        out[j] = pairwise_sum(col);
    }
    return normalize(WaveFunction1D(psi.grid2(), std::move(out)));
}

/// Conditional reduction with numeric and closed-form spreads side by side.
/// `params` and `ms` describe the states passed in and only feed the closed forms.
inline ReductionResult conditional_reduce(const WaveFunction2D& psi, const WaveFunction1D& phi1,
                                          const PhysicalParams& params, const MeasurementSpec& ms) {
    ReductionResult r;
    r.phi2 = project_particle_one(psi, phi1);
    const auto pos = position_stats(r.phi2);
    r.dy2_numeric = pos.std;
    r.mean_numeric = pos.mean;
    r.dp2_numeric = momentum_std_spectral(r.phi2, params.hbar);

    const auto closed = reduced_spreads(params, ms.epsilon);
    r.dy2_closed = closed.dy2;
    r.dp2_closed = closed.dp2y;
    r.mean_closed = reduced_mean(params, ms);

    const auto ref = reduced_state_closed_form(params, ms, psi.grid2());
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < ref.size(); ++j) {
        peak = std::max(peak, std::abs(ref[j]));
        worst = std::max(worst, std::abs(r.phi2[j] - ref[j]));
    }
    r.residual = worst / peak;
    return r;
}

enum class ApertureKind { gaussian, tophat };

/// Amplitude transmission of slit A along y1, valued in [0, 1].
struct ApertureProfile {
    ApertureKind kind = ApertureKind::gaussian;
    double width = 1.0;  // gaussian: pointer-style eps; tophat: full opening
    double center = 0.0;

    [[nodiscard]] double transmission(double y) const {
        const double d = y - center;
        if (kind == ApertureKind::gaussian) return std::exp(-d * d / (4.0 * width * width));
        return std::fabs(d) <= 0.5 * width ? 1.0 : 0.0;
    }
};

struct PostselectResult {
    WaveFunction2D psi_after;
    double pass_probability = 0.0;
};

/// Keeps the pairs whose particle 1 passes the aperture, without recording
/// where. The result is still a two-particle state.
inline PostselectResult aperture_postselect(const WaveFunction2D& psi, const ApertureProfile& aperture) {
    if (!is_positive_finite(aperture.width)) throw ValidationError("aperture width must be > 0");
    std::vector<cplx> amps(psi.amps().begin(), psi.amps().end());
    for (std::size_t i = 0; i < psi.rows(); ++i) {
        const double t = aperture.transmission(psi.grid1().y(i));
        for (std::size_t j = 0; j < psi.cols(); ++j) amps[i * psi.cols() + j] *= t;
    }
    WaveFunction2D filtered(psi.grid1(), psi.grid2(), std::move(amps));
    const double before = l2_norm(psi);
    const double after = l2_norm(filtered);
    const double pass = (after * after) / (before * before);
    if (!(pass >= kZeroNormThreshold)) throw ZeroNorm("aperture blocks the whole state");
    return {normalize(filtered), pass};
}

}  // namespace eprlab
