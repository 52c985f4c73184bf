#pragma once

#include "tmsq/types.hpp"

namespace tmsq {

// Bose occupation at frequency freq_hz and temperature temp_k.
// temp_k = 0 (or exponents past double range) gives exactly 0.
// throws std::invalid_argument for freq_hz <= 0 or temp_k < 0.
double thermal_occupation(double freq_hz, double temp_k);

// Classical working point of the driven three-mode system: solves the
// coupled fixed-point equations for the steady amplitudes (alpha, beta, M)
// by damped iteration. kappas = (kappa_a, kappa_b, kappa_m).
// throws NonConvergence if the normalized residual is still above 1e-10
// after 10000 sweeps.
ClassicalAmplitudes classical_amplitudes(const DriveParams& dp,
                                         const std::array<double, 3>& kappas,
                                         double omega_m = 1.0);

// Enhanced couplings g = |g_a alpha|, G = |g_b beta| and the drive phases
// theta_a = arg(alpha), theta_b = arg(beta).
struct EnhancedCouplings {
    double g = 0.0;
    double theta_a = 0.0;
    double G = 0.0;
    double theta_b = 0.0;
};
EnhancedCouplings enhanced_couplings(const DriveParams& dp,
                                     const ClassicalAmplitudes& amps);

// Mechanically mediated coupling and detuning shift of the adiabatic
// two-mode model (omega_m = 1):
//   g_eff = |2 g G / (delta_b^2 - 1)|
//   delta = 2 (g^2 + G^2) / (1 - delta_b^2)
// throws SingularDetuning when |delta_b^2 - 1| < 1e-12.
struct EffectiveCoupling {
    double g_eff = 0.0;
    double delta = 0.0;
};
EffectiveCoupling effective_coupling(const SystemParams& p);

// effective parameters bundle used by the squeezing/dynamics layers
EffectiveParams effective_params(const SystemParams& p);

// Two-mode squeeze parameter r = artanh(G/g) of the dark/bright mode
// decomposition. Requires g > G >= 0, else InvalidRatio.
double bogoliubov_r(double g, double G);

// Apply fractional systematic miscalibrations (see ErrorCoeffs).
SystemParams apply_systematic_error(const SystemParams& p,
                                    const ErrorCoeffs& e);

} // namespace tmsq
