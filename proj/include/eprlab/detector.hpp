#pragma once

#include <cstddef>

namespace eprlab {

enum class DetectorSide { A, B };

/// Flattened detector array at the detection plane: `n_bins` uniform bins
/// over [y_lo, y_hi). Side A sees particle 1, side B particle 2.
struct DetectorGeometry {
    std::size_t n_bins = 64;
    double y_lo = -8.0;
    double y_hi = 8.0;
    DetectorSide side = DetectorSide::B;

    [[nodiscard]] double bin_width() const { return (y_hi - y_lo) / static_cast<double>(n_bins); }

    friend bool operator==(const DetectorGeometry&, const DetectorGeometry&) = default;
};

inline const char* to_string(DetectorSide side) { return side == DetectorSide::A ? "A" : "B"; }

}  // namespace eprlab
