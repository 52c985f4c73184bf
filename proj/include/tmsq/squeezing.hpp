#pragma once

#include "tmsq/types.hpp"

namespace tmsq {

// Optimal hybrid-quadrature mixing angle phi_tilde = atan2(2 g_eff,
// kappa_a - kappa_b) / 2, in (0, pi/2]. Degenerate when both arguments
// vanish (returns pi/4 with the flag set).
OptimalAngle optimal_angle(double g_eff, double kappa_a, double kappa_b);

// Closed-form variance of the squeezed hybrid quadrature
//   X = cos(phi_tilde) X_a + sin(phi_tilde) Y_b
// at time t, and its t -> inf limit (finite for g_eff^2 < kappa_a kappa_b).
double variance_X(const EffectiveParams& p, double t);
double variance_X_inf(const EffectiveParams& p);

// Closed-form variance of the conjugate (anti-squeezed) quadrature
//   Y = cos(phi_tilde) Y_a - sin(phi_tilde) X_b.
// Exact for kappa_a = kappa_b.
double variance_Y(const EffectiveParams& p, double t);

// Variance of the quadrature described by spec under covariance v
// (4x4, or the photonic block of a 6x6 state is taken).
double variance_from_cm(const Mat& v, const QuadratureSpec& spec);

// Minimal-variance generalized quadrature of the photonic block: smallest
// eigenvalue of the (symmetrized) 4x4 covariance and its eigenvector,
// reported with the recovered angles.
SqueezeReport optimize_quadrature(const Mat& v, double t = 0.0);

// Grid + Nelder-Mead minimization over the three quadrature angles.
// Slow path kept as an independent check of optimize_quadrature.
SqueezeReport optimize_quadrature_numeric(const Mat& v, double t = 0.0,
                                          double grid_step_deg = 2.0);

// Squeezing level S = -10 log10(delta / 0.5) and anti-squeezing level
// S' = +10 log10(delta / 0.5). Throw NonPositiveVariance for delta <= 0.
double squeezing_level(double delta);
double anti_squeezing_level(double delta);

// Relative errors of the full-model levels against the effective one,
// epsilon = |s_lin - s_eff| / |s_eff| (and the tilde variant). Throws
// ZeroReference when |s_eff| == 0.
struct RelativeSlErrors {
    double eps = 0.0;
    double eps_tilde = 0.0;
};
RelativeSlErrors relative_sl_errors(double s_lin, double s_tilde_lin,
                                    double s_eff);

// Characteristic squeezing build-up time tau = 2 pi / (Omega + kappa_a +
// kappa_b) with Omega = hypot(2 g_eff, kappa_a - kappa_b).
double tau(const EffectiveParams& p);

} // namespace tmsq
