#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

namespace eprlab {

/// Physical scales of the two-particle source, in natural units.
///
/// `sigma` is the momentum width of the pair spectrum and `omega0` the length
/// scale of the centre-of-mass envelope. `mass` only enters free evolution.
struct PhysicalParams {
    double sigma = 1.0;
    double omega0 = 1.0;
    double hbar = 1.0;
    double mass = 1.0;

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Uniform grid over [y_min, y_max], both endpoints included.
struct GridSpec {
    std::size_t n_points = 0;
    double y_min = 0.0;
    double y_max = 0.0;

    [[nodiscard]] double dy() const { return (y_max - y_min) / static_cast<double>(n_points - 1); }
    [[nodiscard]] double y(std::size_t i) const { return y_min + static_cast<double>(i) * dy(); }
    [[nodiscard]] double extent() const { return y_max - y_min; }
    // Distance from zero to the nearer edge.
    [[nodiscard]] double half_extent() const { return std::fmin(-y_min, y_max); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Gaussian pointer of width `epsilon` centred at `center` on the y1 axis.
struct MeasurementSpec {
    double epsilon = 0.1;
    double center = 0.0;

    friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

enum class Particle { one, two };

inline bool is_positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace eprlab
