#pragma once

#include "tmsq/matrices.hpp"
#include "tmsq/types.hpp"

namespace tmsq {

// Propagate the covariance ODE dV/dt = A V + V A^T + D from v0 over time t
// exactly, via one matrix exponential of the doubled block system
// [[A, D], [0, -A^T]]. The result is symmetrized. Throws DimensionMismatch
// on inconsistent sizes and NonFiniteResult if entries leave [-1e300, 1e300]
// or stop being finite.
Mat evolve(const Mat& a, const Mat& d, const Mat& v0, double t);
CovarianceState evolve(const DriftMatrix& a, const DiffusionMatrix& d,
                       const CovarianceState& v0, double t);

// Fixed-step classical RK4 on the same ODE; independent cross-check path.
Mat evolve_rk4(const Mat& a, const Mat& d, const Mat& v0, double t,
               int steps);

// Repeated exact stepping with the exponential cached per step size;
// what the trajectory writers use on uniform time grids.
class Propagator {
  public:
    Propagator(Mat a, Mat d);
    Mat step(const Mat& v, double dt);

  private:
    Mat a_, d_, f11_, f12_;
    double dt_cached_;
};

// Steady covariance: solve A V + V A^T + D = 0 through the Kronecker
// system (I (x) A + A (x) I) vec(V) = -vec(D). Requires A Hurwitz
// (max Re eig < -1e-12), else Unstable. The residual is checked to 1e-10.
Mat steady_state(const Mat& a, const Mat& d);
CovarianceState steady_state(const DriftMatrix& a, const DiffusionMatrix& d);

// Coefficients of the closed-form effective-model covariance (thermal
// inputs, V(0) = diag(n_a+1/2, n_a+1/2, n_b+1/2, n_b+1/2)).
// Throws StabilityPole when g_eff^2 == kappa_a*kappa_b exactly.
AnalyticCoefficients analytic_coefficients(const EffectiveParams& p);

// Closed-form 4x4 covariance of the effective model at time t.
CovarianceState analytic_eff_cm(const EffectiveParams& p, double t);

// Nonzero steady-state covariance elements of the reservoir configuration
// in closed form (valid for kappa_b = kappa_a, all occupations zero,
// G < g). Returns the full symmetric 6x6. Throws InvalidRegime if G >= g
// or the decay pattern is outside the closed form's assumptions.
Mat reservoir_steady_elements(double g, double G, double kappa_a,
                              double kappa_m);

// Hurwitz classification with a +-1e-12 marginal band around Re = 0.
StabilityReport classify_stability(const Mat& a);

StabilityReport classify_stability(const DriftMatrix& a);

// Closed-form instability criterion of the effective model:
// unstable iff g_eff^2 > kappa_a * kappa_b (marginal at equality).
StabilityReport effective_stability(double g_eff, double kappa_a,
                                    double kappa_b);

} // namespace tmsq
