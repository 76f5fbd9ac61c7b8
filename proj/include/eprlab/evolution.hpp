#pragma once

// Exact free-particle propagation: the kinetic propagator is diagonal in
// momentum space, so one FFT pair advances a state by any time t.

#include <cmath>
#include <string>
#include <vector>

#include "eprlab/error.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/params.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

struct EvolutionParams {
    double time = 0.0;
    double mass = 1.0;
    double hbar = 1.0;
};

inline EvolutionParams evolution_params(const PhysicalParams& p, double t) { return {t, p.mass, p.hbar}; }

inline void validate_evolution(const EvolutionParams& ep) {
    if (!std::isfinite(ep.time) || ep.time < 0.0) throw ValidationError("evolution time must be finite and >= 0");
    if (!is_positive_finite(ep.mass)) throw ValidationError("mass must be positive and finite");
    if (!is_positive_finite(ep.hbar)) throw ValidationError("hbar must be positive and finite");
}

/// Position spread of a free Gaussian of initial spread w0 after time t.
inline double gaussian_width_at(double w0, const EvolutionParams& ep) {
    const double r = ep.hbar * ep.time / (2.0 * ep.mass * w0 * w0);
    return w0 * std::sqrt(1.0 + r * r);
}

namespace detail {

inline std::vector<cplx> free_phase(const GridSpec& g, const EvolutionParams& ep) {
    const auto k = wavenumbers(g);
    std::vector<cplx> phase(k.size());
    for (std::size_t m = 0; m < k.size(); ++m) {
        const double arg = -ep.hbar * k[m] * k[m] * ep.time / (2.0 * ep.mass);
        phase[m] = {std::cos(arg), std::sin(arg)};
    }
    return phase;
}

inline void apply_propagator(Fft& fft, std::span<const cplx> phase, std::span<const cplx> in, std::span<cplx> out,
                             std::vector<cplx>& scratch) {
    scratch.resize(in.size());
    fft.forward(in, scratch);
    for (std::size_t m = 0; m < scratch.size(); ++m) scratch[m] *= phase[m];
    fft.inverse(scratch, out);
}

}  // namespace detail

/// Spread the state is expected to reach after time t, assuming no
/// position-momentum correlation. Used to reject grids that would wrap.
inline double predicted_width(const WaveFunction1D& wf, const EvolutionParams& ep) {
    const double dy = position_stats(wf).std;
    const double dp = momentum_std_spectral(wf, ep.hbar);
    const double drift = ep.time * dp / ep.mass;
    return std::sqrt(dy * dy + drift * drift);
}

inline WaveFunction1D free_propagate(const WaveFunction1D& wf, const EvolutionParams& ep) {
    validate_evolution(ep);
    if (ep.time == 0.0) return wf;
    const double width = predicted_width(wf, ep);
    const double mean = position_stats(wf).mean + ep.time * momentum_stats_spectral(wf, ep.hbar).mean / ep.mass;
    const auto& g = wf.grid();
    if (std::fmin(mean - g.y_min, g.y_max - mean) < 6.0 * width) {
        throw TailLeak("free_propagate: predicted spread " + std::to_string(width) + " does not fit 6 times on each side of the grid");
    }
    Fft fft;
    const auto phase = detail::free_phase(g, ep);
    std::vector<cplx> out(wf.size()), scratch;
    detail::apply_propagator(fft, phase, wf.amps(), out, scratch);
    return {g, std::move(out)};
}

/// Free flight of one particle of a joint state while the other stays put.
/// Used for the no-measurement branch: the marginal of the propagated particle
/// is the diagonal of its freely evolved reduced density matrix.
inline WaveFunction2D propagate_particle(const WaveFunction2D& wf, Particle p, const EvolutionParams& ep) {
    validate_evolution(ep);
    if (ep.time == 0.0) return wf;
    if (p == Particle::one) return transposed(propagate_particle(transposed(wf), Particle::two, ep));
    Fft fft;
    const auto phase = detail::free_phase(wf.grid2(), ep);
    std::vector<cplx> out(wf.amps().size()), scratch;
    for (std::size_t i = 0; i < wf.rows(); ++i) {
        detail::apply_propagator(fft, phase, wf.row(i), std::span<cplx>(out.data() + i * wf.cols(), wf.cols()), scratch);
    }
    return {wf.grid1(), wf.grid2(), std::move(out)};
}

}  // namespace eprlab
