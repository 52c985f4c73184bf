#include "tmsq/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tmsq/matrices.hpp"
#include "tmsq/model.hpp"
#include "tmsq/util.hpp"

#include "tmsq/errors.hpp"

namespace tmsq {

namespace {

// eigenvalues of script_L(delta_a) = i M(delta_a); M is real, so use the
// real solver and rotate: mu -> i mu
std::array<cplx, 6> coherent_eigs(SystemParams p, double delta_a) {
    p.delta_a = delta_a;
    Mat m = Mat::Zero(6, 6);
    {
        CMat l = build_script_L(p);
        m = (cplx(0.0, -1.0) * l).real(); // recover M
    }
    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    std::array<cplx, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = cplx(0.0, 1.0) * es.eigenvalues()(i);
    return out;
}

// largest |Im lambda| over the six eigenvalues at one detuning
double peak_im(const SystemParams& p, double delta_a) {
    auto eigs = coherent_eigs(p, delta_a);
    double m = 0.0;
    for (const auto& l : eigs) m = std::max(m, std::abs(l.imag()));
    return m;
}

// Continue the six tracked values into the candidate set at the next
// detuning by globally greedy nearest-neighbor assignment. Returns false
// when a branch faces two candidates closer than 1e-12 to each other;
// that continuation is genuinely ambiguous (branch values through an
// exact degeneracy carry no identity).
bool match_step(std::array<cplx, 6>& vals, const std::array<cplx, 6>& cand) {
    struct PairCost {
        double d;
        int i, j;
    };
    std::array<PairCost, 36> costs;
    int k = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            costs[k++] = {std::abs(vals[i] - cand[j]), i, j};
    std::sort(costs.begin(), costs.end(),
              [](const PairCost& a, const PairCost& b) { return a.d < b.d; });

    std::array<int, 6> pick;
    pick.fill(-1);
    std::array<bool, 6> used{};
    int assigned = 0;
    for (const auto& pc : costs) {
        if (pick[pc.i] >= 0 || used[pc.j]) continue;
        // the runner-up candidate for this branch must be distinguishable
        // from the one being taken
        for (const auto& other : costs) {
            if (other.i != pc.i || other.j == pc.j || used[other.j]) continue;
            if (std::abs(cand[other.j] - cand[pc.j]) < 1e-12) return false;
            break; // costs are sorted, first unused runner-up decides
        }
        pick[pc.i] = pc.j;
        used[pc.j] = true;
        if (++assigned == 6) break;
    }
    for (int i = 0; i < 6; ++i) vals[i] = cand[pick[i]];
    return true;
}

void track_into(std::array<cplx, 6>& vals, const SystemParams& p,
                double d_prev, double d_cur, int depth) {
    auto cand = coherent_eigs(p, d_cur);
    std::array<cplx, 6> attempt = vals;
    if (match_step(attempt, cand)) {
        vals = attempt;
        return;
    }
    // one halve-step refinement; an exact degeneracy at d_cur persists
    // through it and is reported
    double mid = 0.5 * (d_prev + d_cur);
    if (depth >= 2 || mid == d_prev || mid == d_cur) {
        std::ostringstream os;
        os << "eigen_scan: branch tracking ambiguous near delta_a = " << d_cur
           << " (degenerate eigenvalues)";
        throw AmbiguousTracking(os.str());
    }
    track_into(vals, p, d_prev, mid, depth + 1);
    track_into(vals, p, mid, d_cur, depth + 1);
}

void check_grid(const std::vector<double>& grid, std::size_t min_size) {
    if (grid.size() < min_size)
        throw std::invalid_argument("scan grid has too few points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("scan grid must increase strictly");
}

} // namespace

ScanResult eigen_scan(const SystemParams& p, const std::vector<double>& grid) {
    check_grid(grid, 2);
    ScanResult res;
    res.grid = grid;

    std::array<cplx, 6> vals = coherent_eigs(p, grid[0]);
    // deterministic seed order
    std::sort(vals.begin(), vals.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (int b = 0; b < 6; ++b) {
        res.branches[b].values.reserve(grid.size());
        res.branches[b].values.push_back(vals[b]);
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
        track_into(vals, p, grid[k - 1], grid[k], 0);
        for (int b = 0; b < 6; ++b) res.branches[b].values.push_back(vals[b]);
    }
    return res;
}

std::vector<double> default_scan_grid(const SystemParams& p, int n) {
    if (n < 5) throw std::invalid_argument("default_scan_grid: n too small");
    double half = 8.0 * std::abs(effective_coupling(p).delta);
    if (half == 0.0)
        throw std::invalid_argument(
            "default_scan_grid: zero window (couplings vanish)");
    double center = -p.delta_b;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = center - half + 2.0 * half * i / (n - 1);
    return grid;
}

GeffExtraction extract_geff_numeric(const SystemParams& p,
                                    const std::vector<double>& grid) {
    check_grid(grid, 5);
    EffectiveCoupling ana = effective_coupling(p);
    double center = -p.delta_b;
    double margin = 5.0 * std::abs(ana.delta);
    if (grid.front() > center - margin || grid.back() < center + margin) {
        std::ostringstream os;
        os << "extract_geff_numeric: grid [" << grid.front() << ", "
           << grid.back() << "] does not bracket " << center
           << " with margin " << margin;
        throw std::invalid_argument(os.str());
    }

    std::size_t best = 0;
    double fbest = -1.0;
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f[i] = peak_im(p, grid[i]);
        if (f[i] > fbest) {
            fbest = f[i];
            best = i;
        }
    }
    if (fbest < 1e-12)
        throw NoSplittingFound(
            "extract_geff_numeric: no imaginary splitting in the window");
    if (best == 0 || best + 1 == grid.size())
        throw NoSplittingFound(
            "extract_geff_numeric: splitting peak sits on the scan boundary");

    // golden-section refinement of the peak between the bracketing points
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = grid[best - 1], b = grid[best + 1];
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = peak_im(p, x1), f2 = peak_im(p, x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = peak_im(p, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = peak_im(p, x1);
        }
    }
    double xs = 0.5 * (a + b);
    GeffExtraction ex;
    ex.g_eff_num = peak_im(p, xs);
    ex.delta_num = xs + p.delta_b;
    ex.g_eff_ana = ana.g_eff;
    ex.delta_ana = ana.delta;
    ex.sigma = std::abs(ex.g_eff_num - ex.g_eff_ana) / std::abs(ex.g_eff_ana);
    return ex;
}

SigmaMapResult sigma_map(const std::vector<double>& g_range,
                         const std::vector<double>& delta_b_range) {
    if (g_range.empty() || delta_b_range.empty())
        throw std::invalid_argument("sigma_map: empty axis");
    for (double g : g_range)
        for (double db : delta_b_range)
            if (!(db > 1.0 + 2.0 * g)) {
                std::ostringstream os;
                os << "sigma_map: delta_b = " << db
                   << " is inside the unsafe window for g = " << g;
                throw std::invalid_argument(os.str());
            }

    SigmaMapResult res;
    res.g = g_range;
    res.delta_b = delta_b_range;
    const std::size_t nc = delta_b_range.size();
    res.sigma = Mat::Constant(static_cast<Eigen::Index>(g_range.size()),
                              static_cast<Eigen::Index>(nc),
                              std::numeric_limits<double>::quiet_NaN());
    parallel_for(g_range.size() * nc, [&](std::size_t cell) {
        std::size_t i = cell / nc, j = cell % nc;
        SystemParams p;
        p.g = p.G = g_range[i];
        p.delta_b = delta_b_range[j];
        p.delta_a = -p.delta_b;
        try {
            auto ex = extract_geff_numeric(p, default_scan_grid(p));
            res.sigma(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) = ex.sigma;
        } catch (const Error&) {
            // cell stays NaN; the map reports what it could measure
        }
    });
    return res;
}

} // namespace tmsq
