#pragma once

// Monte Carlo detector hits: inverse-CDF sampling from grid densities,
// conditional sampling of coincident pairs, and detector-array binning.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "eprlab/detector.hpp"
#include "eprlab/error.hpp"
#include "eprlab/numerics.hpp"
#include "eprlab/rng.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

/// Inverse of the cumulative trapezoid of a grid density. The CDF is linear
/// inside each cell, so draws are uniform within a cell.
class InverseCdfSampler {
public:
    InverseCdfSampler(const GridSpec& grid, std::span<const double> dens) : grid_(grid), cdf_(grid.n_points, 0.0) {
        const double dy = grid.dy();
        for (std::size_t i = 1; i < grid.n_points; ++i) cdf_[i] = cdf_[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * dy;
        total_ = cdf_.back();
        if (!(total_ > 0.0)) throw ZeroNorm("cannot sample from a zero density");
    }

    struct Location {
        std::size_t cell = 0;
        double fraction = 0.0;  // position inside [y(cell), y(cell + 1)]
    };

    [[nodiscard]] Location locate(double u) const {
        const double target = u * total_;
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
        std::size_t cell = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
        cell = std::min(cell, cdf_.size() - 2);
        const double span = cdf_[cell + 1] - cdf_[cell];
        const double f = span > 0.0 ? std::clamp((target - cdf_[cell]) / span, 0.0, 1.0) : 0.0;
        return {cell, f};
    }

    [[nodiscard]] double position(const Location& loc) const {
        return grid_.y(loc.cell) + loc.fraction * grid_.dy();
    }

    [[nodiscard]] double operator()(double u) const { return position(locate(u)); }

    /// Cumulative probability at y under the same piecewise-linear model.
    [[nodiscard]] double cdf(double y) const {
        if (y <= grid_.y_min) return 0.0;
        if (y >= grid_.y_max) return 1.0;
        const double s = (y - grid_.y_min) / grid_.dy();
        const auto cell = std::min(static_cast<std::size_t>(s), cdf_.size() - 2);
        const double f = s - static_cast<double>(cell);
        return (cdf_[cell] + f * (cdf_[cell + 1] - cdf_[cell])) / total_;
    }

private:
    GridSpec grid_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

inline std::vector<double> sample_density(const GridSpec& grid, std::span<const double> dens, std::uint64_t n,
                                          std::uint64_t seed) {
    std::vector<double> out;
    if (n == 0) return out;
    const InverseCdfSampler sampler(grid, dens);
    Xoshiro256 rng(seed);
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) out.push_back(sampler(rng.uniform()));
    return out;
}

/// n positions drawn from |psi(y)|^2.
inline std::vector<double> sample_positions(const WaveFunction1D& wf, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) return {};
    return sample_density(wf.grid(), density(wf), n, seed);
}

struct PositionPair {
    double y1 = 0.0;
    double y2 = 0.0;
};

/// n coincident pairs from |psi(y1, y2)|^2: y1 from its marginal, then y2 from
/// the row slice at y1. Between two rows the slice is chosen with probability
/// given by the position of y1 in the cell. Three uniforms per pair, in order.
inline std::vector<PositionPair> sample_joint(const WaveFunction2D& psi, std::uint64_t n, std::uint64_t seed) {
    std::vector<PositionPair> out;
    if (n == 0) return out;
    const InverseCdfSampler marginal(psi.grid1(), marginal_density(psi, Particle::one));
    std::vector<std::unique_ptr<InverseCdfSampler>> rows(psi.rows());
    std::vector<double> slice(psi.cols());
    auto row_sampler = [&](std::size_t i) -> const InverseCdfSampler& {
        if (!rows[i]) {
            const auto r = psi.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) slice[j] = std::norm(r[j]);
            rows[i] = std::make_unique<InverseCdfSampler>(psi.grid2(), slice);
        }
        return *rows[i];
    };

    Xoshiro256 rng(seed);
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto loc = marginal.locate(rng.uniform());
        const double y1 = marginal.position(loc);
        const std::size_t row = rng.uniform() < loc.fraction ? loc.cell + 1 : loc.cell;
        const double y2 = row_sampler(row)(rng.uniform());
        out.push_back({y1, y2});
    }
    return out;
}

struct DetectorHistogram {
    DetectorGeometry geometry{};
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    [[nodiscard]] double bin_lo(std::size_t b) const { return geometry.y_lo + static_cast<double>(b) * geometry.bin_width(); }
    [[nodiscard]] double bin_hi(std::size_t b) const { return bin_lo(b + 1); }
};

inline DetectorHistogram histogram(std::span<const double> samples, const DetectorGeometry& geom) {
    DetectorHistogram h;
    h.geometry = geom;
    h.counts.assign(geom.n_bins, 0);
    const double w = geom.bin_width();
    for (double y : samples) {
        ++h.total;
        if (y < geom.y_lo) {
            ++h.underflow;
            continue;
        }
        const double s = std::floor((y - geom.y_lo) / w);
        if (s >= static_cast<double>(geom.n_bins)) {
            ++h.overflow;
            continue;
        }
        ++h.counts[static_cast<std::size_t>(s)];
    }
    return h;
}

inline Moments sample_moments(std::span<const double> xs) {
    if (xs.empty()) return {};
    const std::vector<double> ones(xs.size(), 1.0);
    return weighted_moments(xs, ones);
}

inline double sample_correlation(std::span<const PositionPair> pairs) {
    std::vector<double> a(pairs.size()), b(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        a[k] = pairs[k].y1;
        b[k] = pairs[k].y2;
    }
    const auto ma = sample_moments(a);
    const auto mb = sample_moments(b);
    std::vector<double> prod(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) prod[k] = (a[k] - ma.mean) * (b[k] - mb.mean);
    return pairwise_sum(prod) / static_cast<double>(pairs.size()) / (ma.std * mb.std);
}

/// Kolmogorov-Smirnov distance between the samples and a reference CDF.
template <typename Cdf>
double ks_statistic(std::span<const double> samples, const Cdf& cdf) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double f = cdf(sorted[k]);
        d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
    }
    return d;
}

struct ChiSquare {
    double statistic = 0.0;
    std::size_t dof = 0;
};

/// Pearson chi-square of in-range counts against expected bin probabilities.
/// Bins expecting fewer than `min_expected` counts are pooled into their
/// neighbour so the asymptotic distribution applies.
inline ChiSquare chi_square(const DetectorHistogram& h, std::span<const double> bin_prob, double min_expected = 5.0) {
    const double in_range = static_cast<double>(h.total - h.underflow - h.overflow);
    double prob_total = 0.0;
    for (double p : bin_prob) prob_total += p;
    std::vector<double> obs, exp;
    double o = 0.0;
    double e = 0.0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        o += static_cast<double>(h.counts[b]);
        e += in_range * bin_prob[b] / prob_total;
        if (e >= min_expected) {
            obs.push_back(o);
            exp.push_back(e);
            o = e = 0.0;
        }
    }
    if (!exp.empty()) {
        obs.back() += o;
        exp.back() += e;
    }
    ChiSquare out;
    for (std::size_t g = 0; g < exp.size(); ++g) out.statistic += (obs[g] - exp[g]) * (obs[g] - exp[g]) / exp[g];
    out.dof = exp.size() > 1 ? exp.size() - 1 : 0;
    return out;
}

}  // namespace eprlab
