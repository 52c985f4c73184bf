#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tmsq/dynamics.hpp"
#include "tmsq/errors.hpp"
#include "tmsq/model.hpp"
#include "tmsq/util.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace tmsq;

namespace {

SystemParams fig2_params() {
    SystemParams p;
    p.g = 0.1;
    p.G = 0.1;
    p.delta_b = 2.0;
    p.delta_a = -2.013333333333333;
    p.kappa_a = 1e-3;
    p.kappa_b = 1e-3;
    p.kappa_m = 1e-6;
    p.n_a = 0.0;
    p.n_b = 0.0;
    p.n_m = 0.0;
    return p;
}

EffectiveParams fig2_eff() { return effective_params(fig2_params()); }

constexpr double kTau = 409.7729548160599; // 2 pi / (Omega + kappa_a + kappa_b)

Mat vacuum(int n) { return 0.5 * Mat::Identity(n, n); }

double lyap_residual(const Mat& a, const Mat& d, const Mat& v) {
    return (a * v + v * a.transpose() + d).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("exact propagation matches frozen effective-model values") {
    auto ep = fig2_eff();
    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(fig2_params(), Basis::Effective4).d;

    Mat v100 = evolve(a, d, vacuum(4), 100.0);
    CHECK(v100(0, 0) == doctest::Approx(0.9489345982306558).epsilon(1e-12));
    CHECK(v100(0, 3) == doctest::Approx(-0.789884561970356).epsilon(1e-12));

    Mat v300 = evolve(a, d, vacuum(4), 300.0);
    CHECK(v300(0, 0) == doctest::Approx(8.803646832452563).epsilon(1e-12));
    CHECK(v300(0, 3) == doctest::Approx(-8.734059077780982).epsilon(1e-12));

    // propagated covariances stay symmetric
    CHECK((v300 - v300.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact propagation matches frozen full-model values") {
    auto p = fig2_params();
    p.n_m = 10.0; // reference bath: modest mechanical occupation
    Mat a = build_full_drift(p).a;
    Mat d = build_diffusion(p, Basis::Full6).d;
    Mat v300 = evolve(a, d, vacuum(6), 300.0);
    // tolerance covers the matrix-exponential backend difference against
    // the independent reference implementation
    CHECK(v300(0, 0) == doctest::Approx(8.672463400678765).epsilon(1e-9));
    CHECK(v300(0, 3) == doctest::Approx(-8.546884022092435).epsilon(1e-9));
}

TEST_CASE("RK4 cross-check agrees with the exact propagator") {
    auto ep = fig2_eff();
    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(fig2_params(), Basis::Effective4).d;
    Mat exact = evolve(a, d, vacuum(4), kTau);
    Mat rk = evolve_rk4(a, d, vacuum(4), kTau, 2000);
    CHECK((exact - rk).cwiseAbs().maxCoeff() < 1e-9);

    auto p = fig2_params();
    Mat af = build_full_drift(p).a;
    Mat df = build_diffusion(p, Basis::Full6).d;
    Mat exact_f = evolve(af, df, vacuum(6), kTau / 8.0);
    Mat rk_f = evolve_rk4(af, df, vacuum(6), kTau / 8.0, 50000);
    CHECK((exact_f - rk_f).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cached propagator stepping composes to one exact flow") {
    auto ep = fig2_eff();
    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(fig2_params(), Basis::Effective4).d;
    Propagator prop(a, d);
    Mat v = vacuum(4);
    for (int i = 0; i < 64; ++i) v = prop.step(v, kTau / 64.0);
    Mat once = evolve(a, d, vacuum(4), kTau);
    CHECK((v - once).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("typed evolve tracks time and rejects mixed bases") {
    auto p = fig2_params();
    auto ep = fig2_eff();
    DriftMatrix a = build_eff_drift(ep);
    DiffusionMatrix d = build_diffusion(p, Basis::Effective4);
    CovarianceState v0{vacuum(4), 3.0, Basis::Effective4};
    auto v1 = evolve(a, d, v0, 7.0);
    CHECK(v1.t == 10.0);
    CHECK(v1.basis == Basis::Effective4);

    DiffusionMatrix d6 = build_diffusion(p, Basis::Full6);
    CHECK_THROWS_AS(evolve(a, d6, v0, 1.0), DimensionMismatch);
    CHECK_THROWS_AS(evolve(build_eff_drift(ep).a, d6.d, vacuum(6), 1.0),
                    DimensionMismatch);
}

TEST_CASE("propagation of an unstable model eventually overflows cleanly") {
    auto ep = fig2_eff();
    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(fig2_params(), Basis::Effective4).d;
    CHECK_THROWS_AS(evolve(a, d, vacuum(4), 1e6), NonFiniteResult);
}

TEST_CASE("steady state solves the Lyapunov equation") {
    auto p = fig2_params();
    p.g = 0.1;
    p.G = 0.05;
    p.delta_a = 1.0;
    p.delta_b = -1.0;
    Mat a = build_reservoir_drift(p).a;
    Mat d = build_diffusion(p, Basis::Full6).d;
    Mat v = steady_state(a, d);
    CHECK(lyap_residual(a, d, v) < 1e-12);
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() == 0.0);

    // long-time propagation converges to the same point
    Mat vt = evolve(a, d, vacuum(6), 5.0 / 5.005e-4);
    CHECK((v - vt).cwiseAbs().maxCoeff() < 1e-3);

    CovarianceState vs = steady_state(build_reservoir_drift(p),
                                      build_diffusion(p, Basis::Full6));
    CHECK(std::isinf(vs.t));
    CHECK(vs.basis == Basis::Full6);
}

TEST_CASE("steady state refuses non-Hurwitz drift") {
    auto p = fig2_params();
    // two-mode-squeezing instability: g_eff^2 > kappa_a kappa_b
    Mat a = build_eff_drift(fig2_eff()).a;
    Mat d = build_diffusion(p, Basis::Effective4).d;
    CHECK_THROWS_AS(steady_state(a, d), Unstable);
}

TEST_CASE("analytic coefficients at the reference point") {
    auto co = analytic_coefficients(fig2_eff());
    CHECK(co.omega == doctest::Approx(0.013333333333333336).epsilon(1e-14));
    CHECK(co.sin_phi == 0.0);
    CHECK(co.cos_phi == 1.0);
    CHECK(co.phi_tilde == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
    CHECK(co.c_plus == doctest::Approx(0.29411764705882354).epsilon(1e-13));
    CHECK(co.c_minus == doctest::Approx(0.2173913043478261).epsilon(1e-13));
    CHECK(co.c_zero == 0.0);
    CHECK(co.kappa_plus == doctest::Approx(2e-3).epsilon(1e-14));
    CHECK(co.kappa_minus == 0.0);
}

TEST_CASE("analytic coefficients reject the marginal pole") {
    EffectiveParams ep;
    ep.g_eff = 1e-3;
    ep.kappa_a = 1e-3;
    ep.kappa_b = 1e-3;
    ep.n_a = 0.0;
    ep.n_b = 0.0;
    CHECK_THROWS_AS(analytic_coefficients(ep), StabilityPole);
}

TEST_CASE("closed-form effective covariance matches the propagator") {
    auto ep = fig2_eff();
    auto v0 = analytic_eff_cm(ep, 0.0);
    CHECK(v0.basis == Basis::Effective4);
    CHECK((v0.v - vacuum(4)).cwiseAbs().maxCoeff() < 1e-14);

    auto v100 = analytic_eff_cm(ep, 100.0);
    CHECK(v100.v(0, 0) == doctest::Approx(0.9489345982306558).epsilon(1e-12));
    CHECK(v100.v(0, 3) == doctest::Approx(-0.789884561970356).epsilon(1e-12));
    // symmetry fills
    CHECK(v100.v(1, 1) == v100.v(0, 0));
    CHECK(v100.v(2, 2) == v100.v(3, 3));
    CHECK(v100.v(1, 2) == v100.v(0, 3));
    CHECK(v100.v(3, 0) == v100.v(0, 3));

    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(fig2_params(), Basis::Effective4).d;
    for (double t : {25.0, 150.0, 409.7729548160599}) {
        Mat vp = evolve(a, d, vacuum(4), t);
        CHECK((analytic_eff_cm(ep, t).v - vp).cwiseAbs().maxCoeff()
              < 1e-10 * std::max(1.0, vp.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("analytic covariance handles thermal occupations") {
    EffectiveParams ep = fig2_eff();
    ep.n_a = 0.3;
    ep.n_b = 1.2;
    auto v0 = analytic_eff_cm(ep, 0.0);
    CHECK(v0.v(0, 0) == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(v0.v(2, 2) == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(std::abs(v0.v(0, 3)) < 1e-13);

    SystemParams p = fig2_params();
    p.n_a = 0.3;
    p.n_b = 1.2;
    Mat a = build_eff_drift(ep).a;
    Mat d = build_diffusion(p, Basis::Effective4).d;
    Mat want = evolve(a, d, v0.v, 200.0);
    CHECK((analytic_eff_cm(ep, 200.0).v - want).cwiseAbs().maxCoeff()
          < 1e-10 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("reservoir closed form reproduces the Lyapunov steady state") {
    struct Point { double g, ratio, ka, km; };
    for (auto pt : {Point{0.1, 0.5, 1e-3, 1e-6}, Point{0.2, 0.9, 5e-4, 1e-5},
                    Point{0.05, 0.3, 2e-3, 1e-6}}) {
        double G = pt.ratio * pt.g;
        Mat closed = reservoir_steady_elements(pt.g, G, pt.ka, pt.km);

        SystemParams p;
        p.g = pt.g;
        p.G = G;
        p.delta_a = 1.0;
        p.delta_b = -1.0;
        p.kappa_a = pt.ka;
        p.kappa_b = pt.ka;
        p.kappa_m = pt.km;
        p.n_a = p.n_b = p.n_m = 0.0;
        Mat a = build_reservoir_drift(p).a;
        Mat d = build_diffusion(p, Basis::Full6).d;
        Mat numeric = steady_state(a, d);

        CHECK((closed - numeric).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(lyap_residual(a, d, closed) < 1e-12);
    }
}

TEST_CASE("reservoir closed form symmetry pattern") {
    Mat v = reservoir_steady_elements(0.1, 0.05, 1e-3, 1e-6);
    CHECK(v(1, 1) == v(0, 0));
    CHECK(v(3, 3) == v(2, 2));
    CHECK(v(4, 4) == v(5, 5));
    CHECK(v(1, 3) == -v(0, 2));
    CHECK(v(1, 4) == -v(0, 5));
    CHECK(v(3, 4) == v(2, 5));
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // squeezer-beam-splitter interference leaves these strictly zero
    CHECK(v(0, 1) == 0.0);
    CHECK(v(0, 3) == 0.0);
    CHECK(v(0, 4) == 0.0);
}

TEST_CASE("reservoir closed form rejects parameters outside its regime") {
    CHECK_THROWS_AS(reservoir_steady_elements(0.1, 0.1, 1e-3, 1e-6), InvalidRegime);
    CHECK_THROWS_AS(reservoir_steady_elements(0.1, 0.2, 1e-3, 1e-6), InvalidRegime);
    CHECK_THROWS_AS(reservoir_steady_elements(0.1, -0.01, 1e-3, 1e-6), InvalidRegime);
    CHECK_THROWS_AS(reservoir_steady_elements(0.1, 0.05, 0.0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(reservoir_steady_elements(0.1, 0.05, 1e-3, -1e-6), std::invalid_argument);
}

TEST_CASE("stability classification of the reservoir drift") {
    auto make = [](double ratio) {
        SystemParams p;
        p.g = 0.1;
        p.G = ratio * 0.1;
        p.delta_a = 1.0;
        p.delta_b = -1.0;
        p.kappa_a = 1e-3;
        p.kappa_b = 1e-3;
        p.kappa_m = 1e-6;
        p.n_a = p.n_b = p.n_m = 0.0;
        return build_reservoir_drift(p);
    };
    auto r05 = classify_stability(make(0.5));
    CHECK(r05.cls == StabilityClass::stable);
    CHECK(r05.max_re_eig == doctest::Approx(-0.0005004999999999957).epsilon(1e-6));
    auto r09 = classify_stability(make(0.9));
    CHECK(r09.cls == StabilityClass::stable);
    CHECK(r09.max_re_eig == doctest::Approx(-0.0005004999999999992).epsilon(1e-6));
    auto r11 = classify_stability(make(1.1));
    CHECK(r11.cls == StabilityClass::unstable);
    CHECK(r11.max_re_eig == doctest::Approx(0.04532797913961374).epsilon(1e-9));
}

TEST_CASE("closed-form effective stability agrees with the eigenvalues") {
    Rng rng(20240817);
    for (int i = 0; i < 200; ++i) {
        double geff = rng.log_uniform(1e-5, 1e-1);
        double ka = rng.log_uniform(1e-5, 1e-1);
        double kb = rng.log_uniform(1e-5, 1e-1);
        auto closed = effective_stability(geff, ka, kb);
        auto eig = classify_stability(build_eff_drift(geff, ka, kb));
        CHECK(std::abs(closed.max_re_eig - eig.max_re_eig) < 1e-10);
        // skip draws inside the marginal band; the two paths may disagree
        // there only through rounding
        if (std::abs(closed.max_re_eig) > 1e-9)
            CHECK(closed.cls == eig.cls);
    }
    CHECK(effective_stability(1e-3, 1e-3, 1e-3).cls == StabilityClass::marginal);
    CHECK(effective_stability(1e-4, 1e-3, 1e-3).cls == StabilityClass::stable);
    CHECK(effective_stability(2e-3, 1e-3, 1e-3).cls == StabilityClass::unstable);
}
