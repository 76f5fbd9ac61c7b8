#pragma once

// Parameter sweeps of the reduced particle-2 momentum spread.

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "eprlab/analytic.hpp"
#include "eprlab/config.hpp"
#include "eprlab/error.hpp"
#include "eprlab/experiment.hpp"
#include "eprlab/io.hpp"
#include "eprlab/measurement.hpp"
#include "eprlab/state.hpp"

namespace eprlab {

enum class SweepParameter { epsilon, sigma, omega0 };
enum class SweepScale { linear, log };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::epsilon;
    double from = 0.0;
    double to = 0.0;
    std::size_t steps = 2;
    SweepScale scale = SweepScale::linear;
};

struct SweepRow {
    double param_value = 0.0;
    double dy2_closed = 0.0;
    double dp2_closed = 0.0;
    double dp2_numeric = 0.0;
    double dp2_initial = 0.0;
    double ratio = 0.0;  // dp2_numeric / dp2_initial
};

inline SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "epsilon") return SweepParameter::epsilon;
    if (name == "sigma") return SweepParameter::sigma;
    if (name == "omega0") return SweepParameter::omega0;
    throw ValidationError("unknown sweep parameter '" + name + "' (expected epsilon, sigma or omega0)");
}

inline void validate_sweep(const SweepSpec& s) {
    if (!is_positive_finite(s.from) || !is_positive_finite(s.to)) throw ValidationError("sweep bounds must be positive");
    if (!(s.from < s.to)) throw ValidationError("sweep requires from < to");
    if (s.steps < 2) throw ValidationError("sweep requires steps >= 2");
}

inline std::vector<double> sweep_values(const SweepSpec& s) {
    validate_sweep(s);
    std::vector<double> v(s.steps);
    const double last = static_cast<double>(s.steps - 1);
    for (std::size_t i = 0; i < s.steps; ++i) {
        const double f = static_cast<double>(i) / last;
        v[i] = s.scale == SweepScale::log ? std::exp(std::log(s.from) + f * (std::log(s.to) - std::log(s.from)))
                                          : s.from + f * (s.to - s.from);
    }
    v.front() = s.from;
    v.back() = s.to;
    return v;
}

/// One sweep point: closed forms plus the grid reduction on the config's grid,
/// or on auto grids sized separately for each axis.
inline SweepRow sweep_point(const ScenarioConfig& base, SweepParameter param, double value) {
    if (!base.measurement) throw ValidationError("sweep needs a measurement block in the config");
    ScenarioConfig c = base;
    switch (param) {
        case SweepParameter::epsilon: c.measurement->epsilon = value; break;
        case SweepParameter::sigma: c.params.sigma = value; break;
        case SweepParameter::omega0: c.params.omega0 = value; break;
    }
    const auto report = validate(c);
    if (!report.ok()) throw ValidationError(report.message());

    const auto& p = c.params;
    const auto& ms = *c.measurement;
    const GridSpec g1 = c.grid ? *c.grid : auto_grid(p, ms, 0.0, kScenarioGridCap);
    const GridSpec g2 = c.grid ? *c.grid : auto_grid(p, std::nullopt, 0.0, kScenarioGridCap);
    const auto psi = build_joint_state({p, g1, g2});
    const auto red = conditional_reduce(psi, build_pointer_state(ms, g1), p, ms);

    SweepRow row;
    row.param_value = value;
    row.dy2_closed = red.dy2_closed;
    row.dp2_closed = red.dp2_closed;
    row.dp2_numeric = red.dp2_numeric;
    row.dp2_initial = initial_spreads(p).dp2y;
    row.ratio = row.dp2_numeric / row.dp2_initial;
    return row;
}

/// Rows come back in parameter order whatever the completion order.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned jobs = 1) {
    const auto values = sweep_values(spec);
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                rows[i] = sweep_point(base, spec.parameter, values[i]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(values.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "param_value,dy2_closed,dp2_closed,dp2_numeric,dp2_initial,ratio\n";
    for (const auto& r : rows) {
        os << format_double(r.param_value) << ',' << format_double(r.dy2_closed) << ',' << format_double(r.dp2_closed)
           << ',' << format_double(r.dp2_numeric) << ',' << format_double(r.dp2_initial) << ','
           << format_double(r.ratio) << '\n';
    }
}

}  // namespace eprlab
