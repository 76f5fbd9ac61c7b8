#pragma once

// Complex wavefunctions on uniform grids and the quadrature machinery used as
// the numerical oracle for every closed-form spread.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "eprlab/error.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/params.hpp"

namespace eprlab {

/// Largest |psi| at a grid edge, relative to the peak, that still counts as a
/// contained tail.
inline constexpr double kTailTolerance = 1e-6;

/// Norms below this are treated as the zero state.
inline constexpr double kZeroNormThreshold = 1e-30;

/// Largest axis length for which a dense reduced density matrix is formed.
inline constexpr std::size_t kMaxDensityMatrixPoints = 4096;

class WaveFunction1D {
public:
    WaveFunction1D() = default;
    WaveFunction1D(GridSpec grid, std::vector<cplx> amps) : grid_(grid), amps_(std::move(amps)) {
        if (amps_.size() != grid_.n_points || grid_.n_points < 2) {
            throw ValidationError("amplitude count " + std::to_string(amps_.size()) + " does not match grid of " +
                                  std::to_string(grid_.n_points) + " points");
        }
        std::vector<double> dens(amps_.size());
        std::transform(amps_.begin(), amps_.end(), dens.begin(), [](const cplx& a) { return std::norm(a); });
        norm_tag_ = std::sqrt(trapezoid(grid_, dens));
    }

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] std::span<const cplx> amps() const { return amps_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] const cplx& operator[](std::size_t i) const { return amps_[i]; }
    /// L2 norm computed when the amplitudes were set.
    [[nodiscard]] double norm_tag() const { return norm_tag_; }

private:
    GridSpec grid_{};
    std::vector<cplx> amps_;
    double norm_tag_ = 0.0;
};

/// Two-particle amplitude psi(y1, y2), stored row-major: row i is y1 = grid1.y(i).
class WaveFunction2D {
public:
    WaveFunction2D() = default;
    WaveFunction2D(GridSpec grid1, GridSpec grid2, std::vector<cplx> amps)
        : grid1_(grid1), grid2_(grid2), amps_(std::move(amps)) {
        if (amps_.size() != grid1_.n_points * grid2_.n_points || grid1_.n_points < 2 || grid2_.n_points < 2) {
            throw ValidationError("amplitude count does not match the two grids");
        }
    }

    [[nodiscard]] const GridSpec& grid1() const { return grid1_; }
    [[nodiscard]] const GridSpec& grid2() const { return grid2_; }
    [[nodiscard]] const GridSpec& grid(Particle p) const { return p == Particle::one ? grid1_ : grid2_; }
    [[nodiscard]] std::size_t rows() const { return grid1_.n_points; }
    [[nodiscard]] std::size_t cols() const { return grid2_.n_points; }
    [[nodiscard]] std::span<const cplx> amps() const { return amps_; }
    [[nodiscard]] const cplx& at(std::size_t i, std::size_t j) const { return amps_[i * cols() + j]; }
    [[nodiscard]] std::span<const cplx> row(std::size_t i) const { return {amps_.data() + i * cols(), cols()}; }

private:
    GridSpec grid1_{};
    GridSpec grid2_{};
    std::vector<cplx> amps_;
};

// ---------------------------------------------------------------------------
// Norms and densities

inline std::vector<double> density(const WaveFunction1D& wf) {
    std::vector<double> d(wf.size());
    for (std::size_t i = 0; i < wf.size(); ++i) d[i] = std::norm(wf[i]);
    return d;
}

/// Marginal probability density of one particle, integrating |psi|^2 over the other.
inline std::vector<double> marginal_density(const WaveFunction2D& wf, Particle p) {
    const std::size_t n1 = wf.rows();
    const std::size_t n2 = wf.cols();
    std::vector<double> buf;
    if (p == Particle::two) {
        const auto w1 = trapezoid_weights(wf.grid1());
        std::vector<double> out(n2, 0.0);
        for (std::size_t i = 0; i < n1; ++i) {
            const auto r = wf.row(i);
            for (std::size_t j = 0; j < n2; ++j) out[j] += w1[i] * std::norm(r[j]);
        }
        return out;
    }
    std::vector<double> out(n1);
    buf.resize(n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const auto r = wf.row(i);
        for (std::size_t j = 0; j < n2; ++j) buf[j] = std::norm(r[j]);
        out[i] = trapezoid(wf.grid2(), buf);
    }
    return out;
}

inline double l2_norm(const WaveFunction1D& wf) {
    const auto d = density(wf);
    return std::sqrt(trapezoid(wf.grid(), d));
}

inline double l2_norm(const WaveFunction2D& wf) {
    const auto m = marginal_density(wf, Particle::one);
    return std::sqrt(trapezoid(wf.grid1(), m));
}

inline WaveFunction1D normalize(const WaveFunction1D& wf) {
    const double n = l2_norm(wf);
    if (!(n >= kZeroNormThreshold)) throw ZeroNorm("cannot normalize a state with norm " + std::to_string(n));
    std::vector<cplx> a(wf.amps().begin(), wf.amps().end());
    for (auto& v : a) v /= n;
    return {wf.grid(), std::move(a)};
}

inline WaveFunction2D normalize(const WaveFunction2D& wf) {
    const double n = l2_norm(wf);
    if (!(n >= kZeroNormThreshold)) throw ZeroNorm("cannot normalize a state with norm " + std::to_string(n));
    std::vector<cplx> a(wf.amps().begin(), wf.amps().end());
    for (auto& v : a) v /= n;
    return {wf.grid1(), wf.grid2(), std::move(a)};
}

/// Swaps the roles of the two particles.
inline WaveFunction2D transposed(const WaveFunction2D& wf) {
    const std::size_t n1 = wf.rows();
    const std::size_t n2 = wf.cols();
    std::vector<cplx> t(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) t[j * n1 + i] = wf.at(i, j);
    return {wf.grid2(), wf.grid1(), std::move(t)};
}

// ---------------------------------------------------------------------------
// Tail containment

inline double edge_ratio(const WaveFunction1D& wf) {
    double peak = 0.0;
    for (const auto& a : wf.amps()) peak = std::max(peak, std::abs(a));
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(wf.amps().front()), std::abs(wf.amps().back())) / peak;
}

/// Largest edge amplitude along the given particle's axis, relative to the peak.
inline double edge_ratio(const WaveFunction2D& wf, Particle p) {
    double peak = 0.0;
    for (const auto& a : wf.amps()) peak = std::max(peak, std::abs(a));
    if (peak == 0.0) return 0.0;
    double edge = 0.0;
    if (p == Particle::two) {
        for (std::size_t i = 0; i < wf.rows(); ++i)
            edge = std::max({edge, std::abs(wf.at(i, 0)), std::abs(wf.at(i, wf.cols() - 1))});
    } else {
        for (std::size_t j = 0; j < wf.cols(); ++j)
            edge = std::max({edge, std::abs(wf.at(0, j)), std::abs(wf.at(wf.rows() - 1, j))});
    }
    return edge / peak;
}

inline void require_contained_tails(double ratio, const char* what) {
    if (ratio >= kTailTolerance) {
        throw TailLeak(std::string(what) + ": edge amplitude is " + std::to_string(ratio) +
                       " of the peak; widen the grid");
    }
}

// ---------------------------------------------------------------------------
// Position moments

inline Moments density_moments(const GridSpec& g, std::span<const double> dens) {
    auto w = trapezoid_weights(g);
    std::vector<double> y(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        y[i] = g.y(i);
        w[i] *= dens[i];
    }
    return weighted_moments(y, w);
}

inline Moments position_stats(const WaveFunction1D& wf) { return density_moments(wf.grid(), density(wf)); }

inline Moments position_stats(const WaveFunction2D& wf, Particle p) {
    return density_moments(wf.grid(p), marginal_density(wf, p));
}

/// Pearson correlation of (y1, y2) under |psi|^2.
inline double position_correlation_numeric(const WaveFunction2D& wf) {
    const auto m1 = position_stats(wf, Particle::one);
    const auto m2 = position_stats(wf, Particle::two);
    const auto w1 = trapezoid_weights(wf.grid1());
    const auto w2 = trapezoid_weights(wf.grid2());
    std::vector<double> row_terms(wf.rows()), terms(wf.cols()), mass(wf.cols());
    std::vector<double> row_mass(wf.rows());
    for (std::size_t i = 0; i < wf.rows(); ++i) {
        const double d1 = wf.grid1().y(i) - m1.mean;
        const auto r = wf.row(i);
        for (std::size_t j = 0; j < wf.cols(); ++j) {
            const double p = std::norm(r[j]) * w2[j];
            terms[j] = p * d1 * (wf.grid2().y(j) - m2.mean);
            mass[j] = p;
        }
        row_terms[i] = w1[i] * pairwise_sum(terms);
        row_mass[i] = w1[i] * pairwise_sum(mass);
    }
    const double cov = pairwise_sum(row_terms) / pairwise_sum(row_mass);
    return cov / (m1.std * m2.std);
}

// ---------------------------------------------------------------------------
// Momentum moments, spectral route

/// |FFT(psi)|^2 in FFT ordering; pair with wavenumbers(grid).
inline std::vector<double> momentum_density(const WaveFunction1D& wf) {
    Fft fft;
    const auto spec = fft.forward(wf.amps());
    std::vector<double> out(spec.size());
    for (std::size_t m = 0; m < spec.size(); ++m) out[m] = std::norm(spec[m]);
    return out;
}

/// Momentum density of one particle of a joint state, summed over the other.
inline std::vector<double> momentum_density(const WaveFunction2D& wf, Particle p) {
    if (p == Particle::one) return momentum_density(transposed(wf), Particle::two);
    Fft fft;
    const auto w1 = trapezoid_weights(wf.grid1());
    std::vector<double> out(wf.cols(), 0.0);
    std::vector<cplx> spec(wf.cols());
    for (std::size_t i = 0; i < wf.rows(); ++i) {
        fft.forward(wf.row(i), spec);
        for (std::size_t m = 0; m < spec.size(); ++m) out[m] += w1[i] * std::norm(spec[m]);
    }
    return out;
}

inline Moments momentum_stats_spectral(const WaveFunction1D& wf, double hbar = 1.0) {
    require_contained_tails(edge_ratio(wf), "momentum_std_spectral");
    const auto k = wavenumbers(wf.grid());
    const auto m = weighted_moments(k, momentum_density(wf));
    return {hbar * m.mean, hbar * m.std};
}

inline Moments momentum_stats_spectral(const WaveFunction2D& wf, Particle p, double hbar = 1.0) {
    require_contained_tails(edge_ratio(wf, p), "momentum_std_spectral");
    const auto k = wavenumbers(wf.grid(p));
    const auto m = weighted_moments(k, momentum_density(wf, p));
    return {hbar * m.mean, hbar * m.std};
}

inline double momentum_std_spectral(const WaveFunction1D& wf, double hbar = 1.0) {
    return momentum_stats_spectral(wf, hbar).std;
}

inline double momentum_std_spectral(const WaveFunction2D& wf, Particle p, double hbar = 1.0) {
    return momentum_stats_spectral(wf, p, hbar).std;
}

// ---------------------------------------------------------------------------
// Momentum moments, finite-difference route

namespace detail {

// Accumulates <psi| d/dy |psi> and <psi| d^2/dy^2 |psi> along one line using
// fourth-order central differences; amplitudes beyond the grid are zero.
struct DerivativeSums {
    cplx first = 0.0;
    cplx second = 0.0;
};

inline DerivativeSums derivative_sums(std::span<const cplx> f, double h) {
    const std::size_t n = f.size();
    auto at = [&](std::ptrdiff_t i) -> cplx {
        return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? cplx{0.0} : f[static_cast<std::size_t>(i)];
    };
    std::vector<cplx> t1(n), t2(n);
    for (std::size_t ui = 0; ui < n; ++ui) {
        const auto i = static_cast<std::ptrdiff_t>(ui);
        const cplx d1 = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
        const cplx d2 =
            (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
        const double wt = (ui == 0 || ui + 1 == n) ? 0.5 * h : h;
        t1[ui] = wt * std::conj(f[ui]) * d1;
        t2[ui] = wt * std::conj(f[ui]) * d2;
    }
    return {pairwise_sum(t1), pairwise_sum(t2)};
}

inline double momentum_std_from_sums(cplx first, cplx second, double norm2, double hbar) {
    // <p> = -i hbar <d/dy>,  <p^2> = -hbar^2 <d^2/dy^2>
    const double mean_p = (cplx(0.0, -hbar) * first).real() / norm2;
    const double mean_p2 = -hbar * hbar * second.real() / norm2;
    return std::sqrt(std::max(0.0, mean_p2 - mean_p * mean_p));
}

}  // namespace detail

inline double momentum_std_derivative(const WaveFunction1D& wf, double hbar = 1.0) {
    require_contained_tails(edge_ratio(wf), "momentum_std_derivative");
    const auto s = detail::derivative_sums(wf.amps(), wf.grid().dy());
    const double n2 = l2_norm(wf);
    return detail::momentum_std_from_sums(s.first, s.second, n2 * n2, hbar);
}

inline double momentum_std_derivative(const WaveFunction2D& wf, Particle p, double hbar = 1.0) {
    if (p == Particle::one) return momentum_std_derivative(transposed(wf), Particle::two, hbar);
    require_contained_tails(edge_ratio(wf, p), "momentum_std_derivative");
    const auto w1 = trapezoid_weights(wf.grid1());
    std::vector<cplx> first(wf.rows()), second(wf.rows());
    for (std::size_t i = 0; i < wf.rows(); ++i) {
        const auto s = detail::derivative_sums(wf.row(i), wf.grid2().dy());
        first[i] = w1[i] * s.first;
        second[i] = w1[i] * s.second;
    }
    const double n = l2_norm(wf);
    return detail::momentum_std_from_sums(pairwise_sum(first), pairwise_sum(second), n * n, hbar);
}

// ---------------------------------------------------------------------------
// Entanglement diagnostics

struct SchmidtSpectrum {
    std::vector<double> coefficients;  // descending, sum of squares is one
    double entropy = 0.0;
};

/// Schmidt decomposition of the amplitude kernel. Singular values below
/// `truncation` times the largest are dropped.
inline SchmidtSpectrum schmidt(const WaveFunction2D& wf, double truncation = 1e-12) {
    const auto w1 = trapezoid_weights(wf.grid1());
    const auto w2 = trapezoid_weights(wf.grid2());
    const auto n1 = static_cast<Eigen::Index>(wf.rows());
    const auto n2 = static_cast<Eigen::Index>(wf.cols());
    const bool real = std::all_of(wf.amps().begin(), wf.amps().end(), [](const cplx& a) { return a.imag() == 0.0; });

    Eigen::VectorXd sv;
    if (real) {
        Eigen::MatrixXd m(n1, n2);
        for (Eigen::Index i = 0; i < n1; ++i)
            for (Eigen::Index j = 0; j < n2; ++j)
                m(i, j) = wf.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).real() *
                          std::sqrt(w1[static_cast<std::size_t>(i)] * w2[static_cast<std::size_t>(j)]);
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
    } else {
        Eigen::MatrixXcd m(n1, n2);
        for (Eigen::Index i = 0; i < n1; ++i)
            for (Eigen::Index j = 0; j < n2; ++j)
                m(i, j) = wf.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                          std::sqrt(w1[static_cast<std::size_t>(i)] * w2[static_cast<std::size_t>(j)]);
        sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
    }

    SchmidtSpectrum out;
    if (sv.size() == 0 || sv(0) <= 0.0) return out;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) < truncation * sv(0)) break;
        out.coefficients.push_back(sv(k));
    }
    std::vector<double> sq(out.coefficients.size());
    std::transform(out.coefficients.begin(), out.coefficients.end(), sq.begin(), [](double c) { return c * c; });
    const double total = std::sqrt(pairwise_sum(sq));
    std::vector<double> ent(out.coefficients.size());
    for (std::size_t k = 0; k < out.coefficients.size(); ++k) {
        out.coefficients[k] /= total;
        const double p = out.coefficients[k] * out.coefficients[k];
        ent[k] = p > 0.0 ? -p * std::log(p) : 0.0;
    }
    out.entropy = std::max(0.0, pairwise_sum(ent));
    return out;
}

/// Momentum spread of one particle's reduced density matrix
/// rho(y, y') = int psi(., y) psi*(., y') d(other), read off the diagonal of
/// its Fourier transform. Forms rho densely, hence the size limit.
inline double reduced_density_momentum_std(const WaveFunction2D& wf, Particle p, double hbar = 1.0) {
    if (p == Particle::one) return reduced_density_momentum_std(transposed(wf), Particle::two, hbar);
    const std::size_t n = wf.cols();
    if (n > kMaxDensityMatrixPoints) {
        throw MemoryBound("reduced density matrix needs " + std::to_string(n) + "^2 entries; limit is " +
                          std::to_string(kMaxDensityMatrixPoints) + " points per axis");
    }
    require_contained_tails(edge_ratio(wf, p), "reduced_density_momentum_std");

    const auto w1 = trapezoid_weights(wf.grid1());
    const auto rows = static_cast<Eigen::Index>(wf.rows());
    const auto cols = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double s = std::sqrt(w1[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = s * wf.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    // rho(j, j') = sum_i m(i, j) conj(m(i, j'))
    const Eigen::MatrixXcd rho = m.transpose() * m.conjugate();

    // (F rho F^dagger)(k, k): FFT every column, then contract each row k with
    // the conjugate DFT kernel at the same k.
    Fft fft;
    Eigen::MatrixXcd a(cols, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        fft.forward(std::span<const cplx>(rho.col(c).data(), n), std::span<cplx>(a.col(c).data(), n));
    }
    std::vector<cplx> twiddle(n);
    for (std::size_t q = 0; q < n; ++q) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
        twiddle[q] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<double> diag(n);
    std::vector<cplx> terms(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j)
            terms[j] = a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * twiddle[(k * j) % n];
        diag[k] = std::max(0.0, pairwise_sum(terms).real());
    }
    const auto kv = wavenumbers(wf.grid2());
    return hbar * weighted_moments(kv, diag).std;
}

}  // namespace eprlab
