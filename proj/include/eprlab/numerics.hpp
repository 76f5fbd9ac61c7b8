#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "eprlab/params.hpp"

namespace eprlab {

using cplx = std::complex<double>;

/// Pairwise (cascade) summation. Fixed split points make the result depend only
/// on the input values, never on scheduling.
inline double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kBlock = 64;
    if (xs.size() <= kBlock) {
        double acc = 0.0;
        for (double x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline cplx pairwise_sum(std::span<const cplx> xs) {
    constexpr std::size_t kBlock = 64;
    if (xs.size() <= kBlock) {
        cplx acc = 0.0;
        for (const cplx& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Trapezoid weights for a uniform grid: dy everywhere, dy/2 at both ends.
inline std::vector<double> trapezoid_weights(const GridSpec& g) {
    std::vector<double> w(g.n_points, g.dy());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

inline double trapezoid(const GridSpec& g, std::span<const double> f) {
    const double dy = g.dy();
    std::vector<double> terms(f.begin(), f.end());
    terms.front() *= 0.5;
    terms.back() *= 0.5;
    return pairwise_sum(terms) * dy;
}

/// Angular wavenumbers matching the FFT output ordering of an n-point grid.
/// The Nyquist bin is assigned to the negative side.
inline std::vector<double> wavenumbers(const GridSpec& g) {
    const std::size_t n = g.n_points;
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.dy());
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n; ++m) {
        const auto signed_m = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        k[m] = signed_m * dk;
    }
    return k;
}

/// Thin wrapper over Eigen's FFT. Forward is unnormalized, inverse divides by n.
class Fft {
public:
    void forward(std::span<const cplx> in, std::span<cplx> out) {
        impl_.fwd(out.data(), in.data(), static_cast<Eigen::Index>(in.size()));
    }
    void inverse(std::span<const cplx> in, std::span<cplx> out) {
        impl_.inv(out.data(), in.data(), static_cast<Eigen::Index>(in.size()));
    }
    std::vector<cplx> forward(std::span<const cplx> in) {
        std::vector<cplx> out(in.size());
        forward(in, out);
        return out;
    }
    std::vector<cplx> inverse(std::span<const cplx> in) {
        std::vector<cplx> out(in.size());
        inverse(in, out);
        return out;
    }

private:
    Eigen::FFT<double> impl_;
};

/// Mean and standard deviation of a variable.
struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

/// Moments of `x` weighted by the non-negative `weight` (need not sum to one).
inline Moments weighted_moments(std::span<const double> x, std::span<const double> weight) {
    const std::size_t n = x.size();
    std::vector<double> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) w1[i] = weight[i] * x[i];
    const double total = pairwise_sum(weight);
    const double mean = pairwise_sum(w1) / total;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        w2[i] = weight[i] * d * d;
    }
    return {mean, std::sqrt(pairwise_sum(w2) / total)};
}

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace eprlab
