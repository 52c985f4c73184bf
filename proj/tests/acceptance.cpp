// Acceptance suite: one pass/fail line per criterion, with the measured
// values and the pinned tolerances printed next to each verdict. Exits
// nonzero if any criterion fails. Every tolerance is fixed here, not
// derived at runtime.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "tmsq/dynamics.hpp"
#include "tmsq/errors.hpp"
#include "tmsq/experiments.hpp"
#include "tmsq/matrices.hpp"
#include "tmsq/model.hpp"
#include "tmsq/spectral.hpp"
#include "tmsq/squeezing.hpp"
#include "tmsq/util.hpp"

using namespace tmsq;

namespace {

int g_failures = 0;

void verdict(int id, bool ok, const std::string& text) {
    std::printf("[%s] C%d %s\n", ok ? "PASS" : "FAIL", id, text.c_str());
    if (!ok) ++g_failures;
}

void detail(const std::string& text) {
    std::printf("       %s\n", text.c_str());
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

SystemParams reference_params() {
    SystemParams p;
    p.g = 0.1;
    p.G = 0.1;
    p.delta_b = 2.0;
    p.delta_a = -2.013333333333333;
    p.kappa_a = 1e-3;
    p.kappa_b = 1e-3;
    p.kappa_m = 1e-6;
    p.n_a = p.n_b = 0.0;
    p.n_m = 10.0;
    return p;
}

SystemParams rescaled_params(double g) {
    SystemParams p = reference_params();
    p.g = g;
    p.G = g;
    p.delta_b = 1.0 + 10.0 * g;
    p.delta_a = -p.delta_b + effective_coupling(p).delta;
    return p;
}

Mat vacuum(int n) { return 0.5 * Mat::Identity(n, n); }

// squeezed hybrid quadrature X = cos(phi) X_a + sin(phi) Y_b
QuadratureSpec x_spec(double phi) {
    return QuadratureSpec::from_angles(0.0, std::numbers::pi / 2, phi);
}

// conjugate quadrature Y = cos(phi) Y_a - sin(phi) X_b
QuadratureSpec y_spec(double phi) {
    return QuadratureSpec::from_angles(std::numbers::pi / 2, std::numbers::pi,
                                       phi);
}

// ---------------------------------------------------------------- C1
// Steady squeezing of the effective model at the reference point, and
// agreement of the full linearized model after one build-up time.
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    auto p = reference_params();
    auto ep = effective_params(p);

    double dx_inf = variance_X_inf(ep);
    double sl_inf = squeezing_level(dx_inf);
    double t_tau = tau(ep);

    Mat vfull = evolve(build_full_drift(p).a, build_diffusion(p, Basis::Full6).d,
                       vacuum(6), t_tau);
    double dx_full = optimize_quadrature(vfull, t_tau).delta_x;
    double rel_full = std::abs(dx_full - dx_inf) / dx_inf;

    double el = seconds_since(t0);
    bool ok = std::abs(dx_inf - 0.0652) <= 1e-4 &&
              std::abs(dx_inf - 0.066) / 0.066 <= 0.03 && sl_inf >= 8.7 &&
              sl_inf <= 8.9 && rel_full <= 0.10 && el < 1.0;
    verdict(1, ok,
            fmt("steady squeezing floor: dX_inf=%.6f (0.0652+-1e-4, within 3%% "
                "of 0.066), S_inf=%.4f dB (in [8.7, 8.9])",
                dx_inf, sl_inf));
    detail(fmt("full model at tau=%.2f: dX_opt=%.6f, rel dev vs floor %.4f "
               "(<= 0.10); %.2f s (< 1 s)",
               t_tau, dx_full, rel_full, el));
}

// ---------------------------------------------------------------- C2
// Spectral extraction of the mediated coupling from the avoided crossing
// across a 3x3 grid of couplings and detuning ratios.
void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    const double kSigmaTol = 0.015;  // relative deviation from the adiabatic value
    const double kMinSplit = 0.009;  // required resolvable splitting
    bool ok = true;
    for (double g : {0.1, 0.15, 0.2}) {
        for (double r : {8.0, 9.0, 10.0}) {
            SystemParams p = reference_params();
            p.g = g;
            p.G = g;
            p.delta_b = 1.0 + r * g;
            p.delta_a = -p.delta_b;
            auto res = extract_geff_numeric(p, default_scan_grid(p));
            bool cell_ok = res.sigma <= kSigmaTol && res.g_eff_num >= kMinSplit;
            ok = ok && cell_ok;
            detail(fmt("g=%.2f ratio=%.0f: g_eff_num=%.6f (>= %.3f: %s), "
                       "sigma=%.6f (<= %.3f: %s)",
                       g, r, res.g_eff_num, kMinSplit,
                       res.g_eff_num >= kMinSplit ? "yes" : "NO", res.sigma,
                       kSigmaTol, res.sigma <= kSigmaTol ? "yes" : "NO"));
        }
    }
    double el = seconds_since(t0);
    ok = ok && el < 10.0;
    verdict(2, ok,
            fmt("avoided-crossing extraction grid: sigma <= %.3f and "
                "g_eff_num >= %.3f on all 9 cells; %.2f s (< 10 s)",
                kSigmaTol, kMinSplit, el));
}

// ---------------------------------------------------------------- C3
// Independent-path cross validation on randomized parameter draws.
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(770001);

    // (a) exact propagator vs fixed-step RK4
    double worst_a = 0.0;
    for (int i = 0; i < 100; ++i) {
        EffectiveParams ep;
        ep.g_eff = rng.log_uniform(1e-3, 1.6e-2);
        ep.kappa_a = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.kappa_b = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.n_a = rng.uniform(0.0, 2.0);
        ep.n_b = rng.uniform(0.0, 2.0);
        SystemParams noise;
        noise.kappa_a = ep.kappa_a;
        noise.kappa_b = ep.kappa_b;
        noise.n_a = ep.n_a;
        noise.n_b = ep.n_b;
        Mat a = build_eff_drift(ep).a;
        Mat d = build_diffusion(noise, Basis::Effective4).d;
        double t = tau(ep) * rng.uniform(0.1, 1.0);
        Mat ve = evolve(a, d, vacuum(4), t);
        Mat vr = evolve_rk4(a, d, vacuum(4), t, 2000);
        worst_a = std::max(worst_a, (ve - vr).cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < 12; ++i) {
        SystemParams p = rescaled_params(rng.uniform(0.05, 0.25));
        p.n_m = rng.uniform(0.0, 10.0);
        Mat a = build_full_drift(p).a;
        Mat d = build_diffusion(p, Basis::Full6).d;
        double t = tau(effective_params(p)) / 8.0;
        Mat ve = evolve(a, d, vacuum(6), t);
        Mat vr = evolve_rk4(a, d, vacuum(6), t, 20000);
        worst_a = std::max(worst_a, (ve - vr).cwiseAbs().maxCoeff());
    }
    bool ok_a = worst_a < 1e-6;
    detail(fmt("(a) exact vs RK4, 112 draws: worst %.3e (< 1e-6: %s)", worst_a,
               ok_a ? "yes" : "NO"));

    // (b) closed-form effective covariance vs exact propagation
    double worst_b = 0.0;
    for (int i = 0; i < 100; ++i) {
        EffectiveParams ep;
        ep.g_eff = rng.log_uniform(1e-3, 1.6e-2);
        ep.kappa_a = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.kappa_b = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.n_a = rng.uniform(0.0, 2.0);
        ep.n_b = rng.uniform(0.0, 2.0);
        if (std::abs(ep.g_eff * ep.g_eff - ep.kappa_a * ep.kappa_b) <
            1e-3 * ep.g_eff * ep.g_eff)
            continue; // closed form has a removable pole there
        SystemParams noise;
        noise.kappa_a = ep.kappa_a;
        noise.kappa_b = ep.kappa_b;
        noise.n_a = ep.n_a;
        noise.n_b = ep.n_b;
        Mat a = build_eff_drift(ep).a;
        Mat d = build_diffusion(noise, Basis::Effective4).d;
        double t = tau(ep) * rng.uniform(0.0, 1.5);
        Mat want = evolve(a, d, analytic_eff_cm(ep, 0.0).v, t);
        double dev = (analytic_eff_cm(ep, t).v - want).cwiseAbs().maxCoeff();
        worst_b = std::max(worst_b, dev / std::max(1.0, want.cwiseAbs().maxCoeff()));
    }
    bool ok_b = worst_b < 1e-8;
    detail(fmt("(b) closed form vs propagator, 100 draws: worst %.3e "
               "(< 1e-8: %s)",
               worst_b, ok_b ? "yes" : "NO"));

    // (c) reservoir steady-state closed form vs Lyapunov solve
    double worst_c = 0.0;
    for (int i = 0; i < 100; ++i) {
        double g = rng.uniform(0.05, 0.25);
        double ratio = rng.uniform(0.1, 0.9);
        double ka = rng.log_uniform(1e-4, 3.16e-3);
        double km = rng.log_uniform(3.16e-7, 1e-5);
        SystemParams p;
        p.g = g;
        p.G = ratio * g;
        p.delta_a = 1.0;
        p.delta_b = -1.0;
        p.kappa_a = ka;
        p.kappa_b = ka;
        p.kappa_m = km;
        Mat closed = reservoir_steady_elements(g, ratio * g, ka, km);
        Mat numeric = steady_state(build_reservoir_drift(p).a,
                                   build_diffusion(p, Basis::Full6).d);
        worst_c = std::max(worst_c, (closed - numeric).cwiseAbs().maxCoeff());
    }
    bool ok_c = worst_c < 1e-10;
    detail(fmt("(c) reservoir closed form vs Lyapunov solve, 100 draws: "
               "worst %.3e (< 1e-10: %s)",
               worst_c, ok_c ? "yes" : "NO"));

    // (d) squeezed-variance closed form vs its resummed equivalent
    double worst_d = 0.0;
    for (int i = 0; i < 100; ++i) {
        EffectiveParams ep;
        ep.g_eff = rng.log_uniform(1e-3, 1.6e-2);
        ep.kappa_a = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.kappa_b = ep.g_eff * rng.uniform(0.2, 10.0);
        ep.n_a = rng.uniform(0.0, 2.0);
        ep.n_b = rng.uniform(0.0, 2.0);
        auto co = analytic_coefficients(ep);
        double t = tau(ep) * rng.uniform(0.0, 2.0);
        double direct = variance_X(ep, t);
        // resummed form: the t -> inf offset absorbed into the amplitude
        double resummed =
            2.0 * co.c_minus * std::exp(-(co.omega + ep.kappa_a + ep.kappa_b) * t) +
            (co.n_plus + 1.0 + co.sin_phi * co.n_minus) / 2.0 - 2.0 * co.c_minus;
        worst_d = std::max(worst_d, std::abs(direct - resummed));
    }
    bool ok_d = worst_d < 1e-12;
    detail(fmt("(d) variance closed form vs resummed form, 100 draws: worst "
               "%.3e (< 1e-12: %s)",
               worst_d, ok_d ? "yes" : "NO"));

    // (e) eigen-based quadrature optimum vs grid + simplex search
    double worst_e = 0.0;
    auto ep_ref = effective_params(reference_params());
    for (int i = 0; i < 6; ++i) {
        double t = tau(ep_ref) * rng.uniform(0.3, 1.4);
        Mat v = analytic_eff_cm(ep_ref, t).v;
        auto fast = optimize_quadrature(v, t);
        auto slow = optimize_quadrature_numeric(v, t);
        worst_e =
            std::max(worst_e, std::abs(fast.delta_x - slow.delta_x) /
                                  std::max(1e-30, std::abs(slow.delta_x)));
    }
    bool ok_e = worst_e < 1e-6;
    detail(fmt("(e) eigen optimum vs numeric search, 6 states: worst rel "
               "%.3e (< 1e-6: %s)",
               worst_e, ok_e ? "yes" : "NO"));

    double el = seconds_since(t0);
    bool ok = ok_a && ok_b && ok_c && ok_d && ok_e && el < 60.0;
    verdict(3, ok,
            fmt("independent-path cross validation (5 checks, randomized "
                "draws); %.2f s (< 60 s)",
                el));
}

// ---------------------------------------------------------------- C4
// Closed-form stability boundary vs numerical eigenvalues.
void criterion4() {
    Rng rng(770002);
    int checked = 0, disagreements = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double geff = rng.log_uniform(1e-5, 1e-1);
        double ka = rng.log_uniform(1e-5, 1e-1);
        double kb = rng.log_uniform(1e-5, 1e-1);
        auto closed = effective_stability(geff, ka, kb);
        auto eig = classify_stability(build_eff_drift(geff, ka, kb));
        worst = std::max(worst, std::abs(closed.max_re_eig - eig.max_re_eig));
        if (std::abs(closed.max_re_eig) <= 1e-12) continue; // marginal band
        ++checked;
        if (closed.cls != eig.cls) ++disagreements;
    }
    bool ok = disagreements == 0 && worst < 1e-10;
    verdict(4, ok,
            fmt("stability dichotomy: %d/1000 draws outside the marginal "
                "band, %d disagreements (need 0), worst rate dev %.2e",
                checked, disagreements, worst));
}

// ---------------------------------------------------------------- C5
// Steady-state benchmark of the resonant reservoir configuration.
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = default_config();
    std::vector<double> ratios;
    for (int i = 0; i < 90; ++i) ratios.push_back(0.1 + i * (0.89 / 89.0));

    double s_max = -1e300, sp_min = 1e300, sp_max = -1e300;
    for (double g : {0.05, 0.1, 0.2}) {
        cfg.system.g = g;
        cfg.system.G = g; // core rescales G = ratio * g per row
        auto rows = baseline_reservoir(cfg, ratios);
        for (const auto& r : rows) {
            s_max = std::max(s_max, r.s_db);
            sp_min = std::min(sp_min, r.s_prime_db);
            sp_max = std::max(sp_max, r.s_prime_db);
        }
    }
    // the hybrid EPR variance is bounded by 1/4, i.e. 10 log10(2) dB
    const double kBound = 3.010299956639812;
    bool ok_s_bound = s_max <= kBound + 1e-9;
    bool ok_s_strict = s_max < 3.0;
    bool ok_sp = sp_min >= 20.0 && sp_max <= 47.0;
    double el = seconds_since(t0);

    bool ok = ok_s_bound && ok_sp && el < 5.0;
    verdict(5, ok,
            fmt("reservoir benchmark over G/g in [0.1, 0.99], g in {0.05, "
                "0.1, 0.2}; %.2f s (< 5 s)",
                el));
    detail(fmt("max S = %.4f dB: variance-bound reading <= %.4f: %s; strict "
               "reading < 3.0: %s",
               s_max, kBound, ok_s_bound ? "yes" : "NO",
               ok_s_strict ? "yes" : "NO"));
    detail(fmt("S' span [%.2f, %.2f] dB vs required [20, 47] pointwise: %s "
               "(large anti-squeezing only develops near G/g -> 1)",
               sp_min, sp_max, ok_sp ? "yes" : "NO"));
}

// ---------------------------------------------------------------- C6
// The optimal hybrid angle is flat near its optimum but narrow: a 0.1 rad
// offset destroys the squeezing within the same window.
void criterion6() {
    auto ep = effective_params(reference_params());
    double t_tau = tau(ep);
    double phi = optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;
    auto on = x_spec(phi);
    auto off = x_spec(phi + 0.1);

    double max_on = 0.0, max_off = 0.0, first_cross = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        double t = 0.5 * t_tau + i * (t_tau / 1000.0);
        Mat v = analytic_eff_cm(ep, t).v;
        max_on = std::max(max_on, variance_from_cm(v, on));
        double voff = variance_from_cm(v, off);
        max_off = std::max(max_off, voff);
        if (first_cross < 0 && voff > 1.0) first_cross = t;
    }
    bool ok = max_on < 0.5 && first_cross > 0 && first_cross < 1.5 * t_tau;
    verdict(6, ok,
            fmt("angle sensitivity on [0.5 tau, 1.5 tau]: on-angle variance "
                "max %.4f (< 0.5); +0.1 rad offset crosses 1.0 at t=%.1f "
                "(< %.1f), max %.2f",
                max_on, first_cross, 1.5 * t_tau, max_off));
}

// ---------------------------------------------------------------- C7
// Robustness against systematic miscalibration of couplings/detunings.
void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = default_config();

    auto rows = sweep_systematic(cfg, {0.0, 0.2}, {0.0});
    double drift = std::abs(rows[1].s_tilde_lin - rows[0].s_tilde_lin);
    bool ok_gamma = drift <= 0.5;

    RunConfig cfg2 = default_config();
    SystemParams p2 = rescaled_params(0.2);
    cfg2.system = p2;
    auto rows2 = sweep_systematic(cfg2, {0.0}, {1e-3});
    double s_eta = rows2[0].s_lin;
    bool ok_eta = s_eta < 1.0;

    double el = seconds_since(t0);
    bool ok = ok_gamma && ok_eta && el < 30.0;
    verdict(7, ok,
            fmt("systematic-error robustness; %.2f s (< 30 s)", el));
    detail(fmt("optimized level drift |S(gamma=0.2) - S(0)| = %.3f dB "
               "(<= 0.5: %s)",
               drift, ok_gamma ? "yes" : "NO"));
    detail(fmt("fixed-angle level at g=0.2 with eta=1e-3: %.2f dB (< 1: %s; "
               "detuning errors break the fixed quadrature)",
               s_eta, ok_eta ? "yes" : "NO"));
}

// ---------------------------------------------------------------- C8
// Thermal robustness at dilution-refrigerator temperature.
void criterion8() {
    RunConfig cfg = default_config();
    auto rows = sweep_thermal(cfg, {0.02});
    const auto& r = rows[0];
    double drop_half = r.s_tau - r.s_half;
    double drop_three = r.s_tau - r.s_threehalf;
    bool ok = r.s_tau >= 8.0 && drop_half >= 0.5 && drop_half <= 2.0 &&
              drop_three >= 0.5 && drop_three <= 2.0;
    verdict(8, ok,
            fmt("thermal run at 20 mK: S(tau)=%.3f dB (>= 8), S(tau)-S(tau/2)"
                "=%.3f, S(tau)-S(3tau/2)=%.3f (each in [0.5, 2.0])",
                r.s_tau, drop_half, drop_three));
}

// ---------------------------------------------------------------- C9
// Vacuum consistency at t = 0 across all three model variants.
void criterion9() {
    auto p = reference_params();
    auto ep = effective_params(p);
    double phi = optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;
    double worst = 0.0;

    auto check_v = [&](const Mat& v) {
        double dx = variance_from_cm(v, x_spec(phi));
        double dy = variance_from_cm(v, y_spec(phi));
        worst = std::max({worst, std::abs(dx - 0.5), std::abs(dy - 0.5),
                          std::abs(dx * dy - 0.25)});
    };

    check_v(evolve(build_full_drift(p).a, build_diffusion(p, Basis::Full6).d,
                   vacuum(6), 0.0));
    check_v(analytic_eff_cm(ep, 0.0).v);
    SystemParams pr = p;
    pr.G = 0.05;
    pr.delta_a = 1.0;
    pr.delta_b = -1.0;
    check_v(evolve(build_reservoir_drift(pr).a,
                   build_diffusion(pr, Basis::Full6).d, vacuum(6), 0.0));
    worst = std::max({worst, std::abs(variance_X(ep, 0.0) - 0.5),
                      std::abs(variance_Y(ep, 0.0) - 0.5)});

    bool ok = worst < 1e-12;
    verdict(9, ok,
            fmt("vacuum consistency at t=0 in all models: dX=dY=0.5, product "
                "0.25, worst dev %.2e (< 1e-12)",
                worst));
}

} // namespace

int main() {
    std::printf("acceptance checks, library %s\n", version());
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
