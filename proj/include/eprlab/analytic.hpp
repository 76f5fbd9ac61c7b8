#pragma once

// Closed-form spreads of the entangled Gaussian pair and of the state left
// behind after particle 1 is projected onto a Gaussian pointer.
//
// Notation used internally: the joint amplitude is
//   exp(-a (y1 - y2)^2 - b (y1 + y2)^2),  a = sigma^2 / hbar^2,  b = 1 / (16 omega0^2)
// and the pointer is exp(-c (y1 - mu)^2) with c = 1 / (4 eps^2).

#include <cmath>

#include "eprlab/params.hpp"

namespace eprlab {

/// Threshold used to turn "much greater / much smaller" into a number for the
/// strong-correlation regime.
inline constexpr double kStrongCorrelationFactor = 40.0;

struct InitialSpreads {
    double dy1 = 0.0;
    double dy2 = 0.0;
    double dp1y = 0.0;
    double dp2y = 0.0;
};

struct ReducedStateClosedForm {
    double omega = 0.0;  // width of the reduced Gaussian, equal to dy2
    double alpha = 0.0;  // sigma^2/hbar^2 + 1/(16 omega0^2) + 1/(4 eps^2)
    double dy2 = 0.0;
    double dp2y = 0.0;
    double dp1y = 0.0;
};

struct StrongCorrelationApprox {
    double value = 0.0;
    bool regime_ok = false;
};

namespace detail {

inline double marginal_momentum_spread(const PhysicalParams& p) {
    return std::sqrt(p.sigma * p.sigma + p.hbar * p.hbar / (16.0 * p.omega0 * p.omega0));
}

inline double marginal_position_spread(const PhysicalParams& p) {
    return std::sqrt(p.omega0 * p.omega0 + p.hbar * p.hbar / (16.0 * p.sigma * p.sigma));
}

}  // namespace detail

inline InitialSpreads initial_spreads(const PhysicalParams& p) {
    const double dp = detail::marginal_momentum_spread(p);
    const double dy = detail::marginal_position_spread(p);
    return {dy, dy, dp, dp};
}

/// Width of the reduced particle-2 Gaussian after projecting particle 1 onto a
/// pointer of width eps.
inline double reduced_width(const PhysicalParams& p, double eps) {
    const double s2 = p.sigma * p.sigma;
    const double o2 = p.omega0 * p.omega0;
    const double h2 = p.hbar * p.hbar;
    const double e2 = eps * eps;
    const double coupling = h2 / (16.0 * s2 * o2);
    const double num = e2 * (1.0 + coupling) + h2 / (4.0 * s2);
    const double den = 1.0 + e2 / o2 + coupling;
    return std::sqrt(num / den);
}

inline ReducedStateClosedForm reduced_spreads(const PhysicalParams& p, double eps) {
    const double s2 = p.sigma * p.sigma;
    const double o2 = p.omega0 * p.omega0;
    const double h2 = p.hbar * p.hbar;
    const double e2 = eps * eps;

    ReducedStateClosedForm r;
    r.alpha = s2 / h2 + 1.0 / (16.0 * o2) + 1.0 / (4.0 * e2);
    r.omega = reduced_width(p, eps);
    r.dy2 = r.omega;
    const double num = s2 * (1.0 + e2 / o2) + h2 / (16.0 * o2);
    const double den = 1.0 + 4.0 * e2 * (s2 / h2 + 1.0 / (16.0 * o2));
    r.dp2y = std::sqrt(num / den);
    r.dp1y = p.hbar / (2.0 * eps);
    return r;
}

/// Momentum spread of a minimum-uncertainty Gaussian of position width dy.
inline double min_uncertainty_momentum(double hbar, double dy) { return hbar / (2.0 * dy); }

/// Mean of the reduced particle-2 state for a pointer centred at `center`.
/// Zero for the slit on the axis.
inline double reduced_mean(const PhysicalParams& p, const MeasurementSpec& ms) {
    const double a = p.sigma * p.sigma / (p.hbar * p.hbar);
    const double b = 1.0 / (16.0 * p.omega0 * p.omega0);
    const double c = 1.0 / (4.0 * ms.epsilon * ms.epsilon);
    return (a - b) * c * ms.center / (4.0 * a * b + c * (a + b));
}

inline double limit_dp2_eps_to_zero(const PhysicalParams& p) { return detail::marginal_momentum_spread(p); }

inline StrongCorrelationApprox approx_dp2_strong_correlation(const PhysicalParams& p, double eps) {
    StrongCorrelationApprox out;
    out.value = p.hbar / std::sqrt(p.hbar * p.hbar / (p.sigma * p.sigma) + 4.0 * eps * eps);
    out.regime_ok = p.sigma >= kStrongCorrelationFactor * (p.hbar / (4.0 * p.omega0)) &&
                    eps <= p.omega0 / kStrongCorrelationFactor;
    return out;
}

/// omega0 at which the pair factorizes into a product of two Gaussians.
inline double disentangling_omega0(const PhysicalParams& p) { return p.hbar / (4.0 * p.sigma); }

inline bool is_disentangled(const PhysicalParams& p, double rel_tol) {
    const double target = disentangling_omega0(p);
    return std::fabs(p.omega0 - target) <= rel_tol * target;
}

/// Pearson correlation of (y1, y2) under |psi|^2.
inline double position_correlation(const PhysicalParams& p) {
    const double o2 = p.omega0 * p.omega0;
    const double q = p.hbar * p.hbar / (16.0 * p.sigma * p.sigma);
    return (o2 - q) / (o2 + q);
}

/// Position spread of one particle conditioned on the other's exact position:
/// the narrowest feature of the joint state along either axis.
inline double conditional_width(const PhysicalParams& p) {
    return p.hbar / (2.0 * detail::marginal_momentum_spread(p));
}

/// Position spread of a particle's marginal after free flight for time t.
/// The joint amplitude is real, so position and momentum are uncorrelated and
/// the variances add.
inline double evolved_marginal_width(const PhysicalParams& p, double t) {
    const double dy = detail::marginal_position_spread(p);
    const double dp = detail::marginal_momentum_spread(p);
    const double drift = t * dp / p.mass;
    return std::sqrt(dy * dy + drift * drift);
}

}  // namespace eprlab
