#pragma once

#include "tmsq/types.hpp"

namespace tmsq {

// Eigenvalues of script_L(delta_a) tracked continuously across the grid by
// nearest-neighbor matching. When two candidate continuations coincide to
// within 1e-12 the step is subdivided; if an exact degeneracy persists the
// scan throws AmbiguousTracking.
ScanResult eigen_scan(const SystemParams& p, const std::vector<double>& grid);

// Locate the avoided-crossing splitting near delta_a = -delta_b:
// scan |Im lambda|, refine the peak by golden-section search between the
// bracketing grid points (tol 1e-10), and compare with the adiabatic
// prediction. The grid must bracket -delta_b with margin >= 5 |delta_ana|,
// else std::invalid_argument. Throws NoSplittingFound when the peak
// splitting is below 1e-12.
GeffExtraction extract_geff_numeric(const SystemParams& p,
                                    const std::vector<double>& grid);

// Evenly spaced default scan window: n points covering
// -delta_b +- 8 |delta_ana|.
std::vector<double> default_scan_grid(const SystemParams& p, int n = 121);

// Relative deviation map sigma(g, delta_b) with g = G. Cells where the
// extraction fails are NaN; the sweep itself never throws for cell-level
// failures. Requires every delta_b > 1 + 2 g (scan-safe region).
struct SigmaMapResult {
    std::vector<double> g;       // row axis
    std::vector<double> delta_b; // column axis
    Mat sigma;                   // g.size() x delta_b.size()
};
SigmaMapResult sigma_map(const std::vector<double>& g_range,
                         const std::vector<double>& delta_b_range);

} // namespace tmsq
