#include "tmsq/matrices.hpp"

#include <cmath>

#include "tmsq/errors.hpp"

namespace tmsq {

namespace {

// real structure matrix of the coherent flow, script_L = i * M
Mat structure_matrix(const SystemParams& p) {
    const double wm = 1.0;
    Mat m = Mat::Zero(6, 6);
    m(0, 1) = -p.delta_a;
    m(1, 0) = p.delta_a;
    m(1, 4) = 2.0 * p.g;
    m(2, 3) = -p.delta_b;
    m(3, 2) = p.delta_b;
    m(3, 4) = 2.0 * p.G;
    m(4, 5) = -wm;
    m(5, 0) = 2.0 * p.g;
    m(5, 2) = 2.0 * p.G;
    m(5, 4) = wm;
    return m;
}

} // namespace

CMat build_script_L(const SystemParams& p) {
    p.validate();
    return cplx(0.0, 1.0) * structure_matrix(p).cast<cplx>();
}

DriftMatrix build_full_drift(const SystemParams& p) {
    // go through the complex script_L so the two builders cannot drift apart
    CMat minus_a_coh = cplx(0.0, 1.0) * build_script_L(p); // = -M, real
    double max_imag = minus_a_coh.imag().cwiseAbs().maxCoeff();
    if (max_imag > 1e-15)
        throw NonFiniteResult("build_full_drift: coherent part not real");
    Mat a = minus_a_coh.real();
    a(0, 0) -= p.kappa_a;
    a(1, 1) -= p.kappa_a;
    a(2, 2) -= p.kappa_b;
    a(3, 3) -= p.kappa_b;
    a(4, 4) -= p.kappa_m;
    a(5, 5) -= p.kappa_m;
    return DriftMatrix{std::move(a), Basis::Full6};
}

DriftMatrix build_eff_drift(double g_eff, double kappa_a, double kappa_b) {
    if (kappa_a < 0 || kappa_b < 0)
        throw std::invalid_argument("build_eff_drift: negative decay");
    Mat a = Mat::Zero(4, 4);
    a(0, 0) = -kappa_a;
    a(1, 1) = -kappa_a;
    a(2, 2) = -kappa_b;
    a(3, 3) = -kappa_b;
    a(0, 3) = -g_eff;
    a(3, 0) = -g_eff;
    a(1, 2) = -g_eff;
    a(2, 1) = -g_eff;
    return DriftMatrix{std::move(a), Basis::Effective4};
}

DriftMatrix build_eff_drift(const EffectiveParams& p) {
    return build_eff_drift(p.g_eff, p.kappa_a, p.kappa_b);
}

DriftMatrix build_reservoir_drift(const SystemParams& p) {
    p.validate();
    Mat a = Mat::Zero(6, 6);
    a(0, 0) = -p.kappa_a;
    a(1, 1) = -p.kappa_a;
    a(2, 2) = -p.kappa_b;
    a(3, 3) = -p.kappa_b;
    a(4, 4) = -p.kappa_m;
    a(5, 5) = -p.kappa_m;
    // mode a, two-mode-squeezer coupling to the mechanics
    a(0, 5) = p.g;
    a(1, 4) = -p.g;
    a(5, 0) = -p.g;
    a(4, 1) = p.g;
    // mode b, beam-splitter coupling
    a(2, 5) = -p.G;
    a(3, 4) = -p.G;
    a(5, 2) = -p.G;
    a(4, 3) = -p.G;
    return DriftMatrix{std::move(a), Basis::Full6};
}

DiffusionMatrix build_diffusion(const SystemParams& p, Basis basis) {
    p.validate();
    int n = basis_dim(basis);
    Mat d = Mat::Zero(n, n);
    d(0, 0) = d(1, 1) = p.kappa_a * (2.0 * p.n_a + 1.0);
    d(2, 2) = d(3, 3) = p.kappa_b * (2.0 * p.n_b + 1.0);
    if (basis == Basis::Full6)
        d(4, 4) = d(5, 5) = p.kappa_m * (2.0 * p.n_m + 1.0);
    return DiffusionMatrix{std::move(d), basis};
}

} // namespace tmsq
