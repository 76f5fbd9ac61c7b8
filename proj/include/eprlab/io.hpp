#pragma once

// File formats: scenario configs and reports as JSON, histograms and sweeps
// as CSV, wavefunctions in the binary EPWF container.
//
// EPWF layout, all little-endian:
//   "EPWF" | version u32 | n1 u32 | n2 u32 | y1_min y1_max y2_min y2_max f64
//   then n1 * max(n2, 1) (re, im) f64 pairs, row-major.
// A one-particle state is stored with n2 = 0 and a zero y2 range.

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "eprlab/config.hpp"
#include "eprlab/error.hpp"
#include "eprlab/experiment.hpp"
#include "eprlab/sampling.hpp"
#include "eprlab/wavefunction.hpp"

namespace eprlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Numbers

/// Shortest-safe text form of a double: 17 significant digits.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// JSON: configuration

inline void to_json(json& j, const PhysicalParams& p) {
    j = json{{"sigma", p.sigma}, {"omega0", p.omega0}, {"hbar", p.hbar}, {"mass", p.mass}};
}

inline void from_json(const json& j, PhysicalParams& p) {
    p = PhysicalParams{};
    p.sigma = j.value("sigma", p.sigma);
    p.omega0 = j.value("omega0", p.omega0);
    p.hbar = j.value("hbar", p.hbar);
    p.mass = j.value("mass", p.mass);
}

inline void to_json(json& j, const GridSpec& g) {
    j = json{{"n_points", g.n_points}, {"y_min", g.y_min}, {"y_max", g.y_max}, {"dy", g.dy()}};
}

inline void from_json(const json& j, GridSpec& g) {
    g.n_points = j.at("n_points").get<std::size_t>();
    g.y_min = j.at("y_min").get<double>();
    g.y_max = j.at("y_max").get<double>();
}

inline void to_json(json& j, const MeasurementSpec& m) { j = json{{"epsilon", m.epsilon}, {"center", m.center}}; }

inline void from_json(const json& j, MeasurementSpec& m) {
    m.epsilon = j.at("epsilon").get<double>();
    m.center = j.value("center", 0.0);
}

inline void to_json(json& j, const DetectorGeometry& d) {
    j = json{{"n_bins", d.n_bins}, {"y_range", {d.y_lo, d.y_hi}}, {"side", to_string(d.side)}};
}

inline void from_json(const json& j, DetectorGeometry& d) {
    d = DetectorGeometry{};
    d.n_bins = j.value("n_bins", d.n_bins);
    if (j.contains("y_range")) {
        const auto& r = j.at("y_range");
        if (!r.is_array() || r.size() != 2) throw ValidationError("detector.y_range must be [lo, hi]");
        d.y_lo = r[0].get<double>();
        d.y_hi = r[1].get<double>();
    }
    const auto side = j.value("side", std::string("B"));
    if (side == "A") {
        d.side = DetectorSide::A;
    } else if (side == "B") {
        d.side = DetectorSide::B;
    } else {
        throw ValidationError("detector.side must be \"A\" or \"B\"");
    }
}

inline void to_json(json& j, const ScenarioConfig& c) {
    j = json{{"params", c.params},
             {"grid", c.grid ? json(*c.grid) : json(nullptr)},
             {"measurement", c.measurement ? json(*c.measurement) : json(nullptr)},
             {"evolution_time", c.evolution_time},
             {"n_samples", c.n_samples},
             {"seed", c.seed},
             {"detector", c.detector}};
    if (c.grid) j["grid"].erase("dy");
}

inline void from_json(const json& j, ScenarioConfig& c) {
    c = ScenarioConfig{};
    if (j.contains("params")) c.params = j.at("params").get<PhysicalParams>();
    if (j.contains("grid") && !j.at("grid").is_null()) c.grid = j.at("grid").get<GridSpec>();
    if (j.contains("measurement") && !j.at("measurement").is_null())
        c.measurement = j.at("measurement").get<MeasurementSpec>();
    c.evolution_time = j.value("evolution_time", 0.0);
    c.n_samples = j.value("n_samples", std::uint64_t{0});
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("detector")) c.detector = j.at("detector").get<DetectorGeometry>();
}

inline ScenarioConfig parse_config(std::istream& in) {
    try {
        return json::parse(in).get<ScenarioConfig>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// JSON: report

inline void to_json(json& j, const Moments& m) { j = json{{"mean", m.mean}, {"std", m.std}}; }

inline json report_to_json(const ScenarioReport& r, bool include_timings = true) {
    const auto& a = r.analytic;
    json analytic = {{"initial",
                      {{"dy1", a.initial.dy1}, {"dy2", a.initial.dy2}, {"dp1y", a.initial.dp1y}, {"dp2y", a.initial.dp2y}}},
                     {"dp2_sharp_limit", a.dp2_sharp_limit},
                     {"position_correlation", a.position_correlation},
                     {"disentangled", a.disentangled},
                     {"detector_width_unmeasured", a.detector_width_unmeasured}};
    if (a.reduced) {
        analytic["reduced"] = {{"omega", a.reduced->omega}, {"alpha", a.reduced->alpha}, {"dy2", a.reduced->dy2},
                               {"dp2y", a.reduced->dp2y},   {"dp1y", a.reduced->dp1y},   {"mean", a.reduced_mean}};
        analytic["strong_correlation"] = {{"dp2y", a.strong_correlation->value},
                                          {"regime_ok", a.strong_correlation->regime_ok}};
        analytic["detector_width_measured"] = a.detector_width_measured;
        analytic["dp2_ratio"] = a.reduced->dp2y / a.initial.dp2y;
    }

    const auto& n = r.numeric;
    json numeric = {{"grid1", n.grid1},
                    {"grid2", n.grid2},
                    {"position1", n.position1},
                    {"position2", n.position2},
                    {"dp1", n.dp1},
                    {"dp2", n.dp2},
                    {"dp2_derivative", n.dp2_derivative},
                    {"position_correlation", n.position_correlation},
                    {"detector_std_unmeasured", n.detector_std_unmeasured}};
    if (n.reduced_dy2) {
        numeric["reduced"] = {{"grid", n.grid2},
                              {"dy2", *n.reduced_dy2},
                              {"dp2", *n.reduced_dp2},
                              {"mean", *n.reduced_mean},
                              {"residual", *n.reduced_residual}};
        numeric["dp2_ratio"] = *n.dp2_ratio;
        numeric["detector_std_measured"] = *n.detector_std_measured;
        numeric["detector_spread_ratio"] = *n.detector_spread_ratio;
    }

    const auto& s = r.sampled;
    json sampled = {{"side", to_string(s.side)},
                    {"n", s.n},
                    {"position", s.position},
                    {"ks", s.ks},
                    {"joint_correlation", s.joint_correlation},
                    {"histogram",
                     {{"geometry", s.histogram.geometry},
                      {"counts", s.histogram.counts},
                      {"total", s.histogram.total},
                      {"underflow", s.histogram.underflow},
                      {"overflow", s.histogram.overflow}}}};

    json contracts = json::array();
    for (const auto& c : r.contracts)
        contracts.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"ok", c.ok}});

    json out = {{"config", r.config}, {"analytic", analytic}, {"numeric", numeric}, {"sampled", sampled},
                {"contracts", contracts}, {"seed", r.seed}};
    if (include_timings) out["timings_ms"] = r.timings_ms;
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_histogram_csv(std::ostream& os, const DetectorHistogram& h) {
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        os << format_double(h.bin_lo(b)) << ',' << format_double(h.bin_hi(b)) << ',' << h.counts[b] << '\n';
}

// ---------------------------------------------------------------------------
// EPWF binary container

inline constexpr std::array<char, 4> kEpwfMagic{'E', 'P', 'W', 'F'};
inline constexpr std::uint32_t kEpwfVersion = 1;

namespace detail {

template <typename T>
void put_le(std::ostream& os, T v) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    auto bits = std::bit_cast<U>(v);
    for (std::size_t b = 0; b < sizeof(U); ++b) os.put(static_cast<char>((bits >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(std::istream& is) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof()) throw ValidationError("truncated EPWF stream");
        bits |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * b);
    }
    return std::bit_cast<T>(bits);
}

inline void write_epwf(std::ostream& os, const GridSpec& g1, const GridSpec* g2, std::span<const cplx> amps) {
    os.write(kEpwfMagic.data(), kEpwfMagic.size());
    put_le<std::uint32_t>(os, kEpwfVersion);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g1.n_points));
    put_le<std::uint32_t>(os, g2 ? static_cast<std::uint32_t>(g2->n_points) : 0u);
    put_le<double>(os, g1.y_min);
    put_le<double>(os, g1.y_max);
    put_le<double>(os, g2 ? g2->y_min : 0.0);
    put_le<double>(os, g2 ? g2->y_max : 0.0);
    for (const auto& a : amps) {
        put_le<double>(os, a.real());
        put_le<double>(os, a.imag());
    }
}

}  // namespace detail

inline void write_wavefunction(std::ostream& os, const WaveFunction1D& wf) {
    detail::write_epwf(os, wf.grid(), nullptr, wf.amps());
}

inline void write_wavefunction(std::ostream& os, const WaveFunction2D& wf) {
    detail::write_epwf(os, wf.grid1(), &wf.grid2(), wf.amps());
}

using AnyWaveFunction = std::variant<WaveFunction1D, WaveFunction2D>;

inline AnyWaveFunction read_wavefunction(std::istream& is) {
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kEpwfMagic) throw ValidationError("not an EPWF stream");
    const auto version = detail::get_le<std::uint32_t>(is);
    if (version != kEpwfVersion) throw ValidationError("unsupported EPWF version " + std::to_string(version));
    const auto n1 = detail::get_le<std::uint32_t>(is);
    const auto n2 = detail::get_le<std::uint32_t>(is);
    GridSpec g1{n1, detail::get_le<double>(is), detail::get_le<double>(is)};
    GridSpec g2{n2, detail::get_le<double>(is), detail::get_le<double>(is)};
    const std::size_t count = static_cast<std::size_t>(n1) * (n2 == 0 ? 1u : n2);
    std::vector<cplx> amps(count);
    for (auto& a : amps) {
        const double re = detail::get_le<double>(is);
        const double im = detail::get_le<double>(is);
        a = {re, im};
    }
    if (n2 == 0) return WaveFunction1D(g1, std::move(amps));
    return WaveFunction2D(g1, g2, std::move(amps));
}

template <typename WaveFunction>
void save_wavefunction(const std::string& path, const WaveFunction& wf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + path);
    write_wavefunction(os, wf);
    if (!os) throw ValidationError("write failed for " + path);
}

inline AnyWaveFunction load_wavefunction(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot read " + path);
    return read_wavefunction(is);
}

}  // namespace eprlab
