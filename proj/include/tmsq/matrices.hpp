#pragma once

#include "tmsq/types.hpp"

namespace tmsq {

// Quadrature transition matrix of the coherent part of the full model,
// dR/dt|_coh = script_L R with script_L = i M for a real structure matrix M.
// Basis (X_a, Y_a, X_b, Y_b, X_m, Y_m), omega_m = 1.
CMat build_script_L(const SystemParams& p);

// Full 6x6 drift: coherent part plus diagonal damping
// -diag(kappa_a, kappa_a, kappa_b, kappa_b, kappa_m, kappa_m).
DriftMatrix build_full_drift(const SystemParams& p);

// Effective 4x4 drift of the mechanically mediated two-mode model,
//   A_eff = -[[k_a, 0, 0, g], [0, k_a, g, 0], [0, g, k_b, 0], [g, 0, 0, k_b]]
// with g = g_eff.
DriftMatrix build_eff_drift(double g_eff, double kappa_a, double kappa_b);
DriftMatrix build_eff_drift(const EffectiveParams& p);

// 6x6 drift of the resonant reservoir-engineering configuration
// (delta_a = omega_m, delta_b = -omega_m, rotating-wave form): mode b
// couples beam-splitter-like, mode a squeezer-like, to the mechanics.
DriftMatrix build_reservoir_drift(const SystemParams& p);

// Diagonal diffusion matrix: entries kappa_o (2 n_o + 1), two per mode.
DiffusionMatrix build_diffusion(const SystemParams& p, Basis basis);

} // namespace tmsq
