#include "tmsq/model.hpp"

#include <cmath>
#include <sstream>

#include "tmsq/errors.hpp"

namespace tmsq {

void SystemParams::validate() const {
    auto bad = [](const char* what, double v) {
        std::ostringstream os;
        os << what << " = " << v << " is out of range";
        throw std::invalid_argument(os.str());
    };
    if (!(kappa_a >= 0.0) || !std::isfinite(kappa_a)) bad("kappa_a", kappa_a);
    if (!(kappa_b >= 0.0) || !std::isfinite(kappa_b)) bad("kappa_b", kappa_b);
    if (!(kappa_m >= 0.0) || !std::isfinite(kappa_m)) bad("kappa_m", kappa_m);
    if (!(n_a >= 0.0)) bad("n_a", n_a);
    if (!(n_b >= 0.0)) bad("n_b", n_b);
    if (!(n_m >= 0.0)) bad("n_m", n_m);
    if (!(g >= 0.0) || !std::isfinite(g)) bad("g", g);
    if (!(G >= 0.0) || !std::isfinite(G)) bad("G", G);
    if (!std::isfinite(delta_a)) bad("delta_a", delta_a);
    if (!std::isfinite(delta_b)) bad("delta_b", delta_b);
}

double thermal_occupation(double freq_hz, double temp_k) {
    if (!(freq_hz > 0.0))
        throw std::invalid_argument("thermal_occupation: freq_hz must be > 0");
    if (temp_k < 0.0)
        throw std::invalid_argument("thermal_occupation: temp_k must be >= 0");
    if (temp_k == 0.0) return 0.0;
    constexpr double h = 6.62607015e-34;  // J s
    constexpr double kb = 1.380649e-23;   // J / K
    double x = h * freq_hz / (kb * temp_k);
    if (x > 700.0) return 0.0; // exp would overflow; occupation is ~0 anyway
    return 1.0 / std::expm1(x);
}

ClassicalAmplitudes classical_amplitudes(const DriveParams& dp,
                                         const std::array<double, 3>& kappas,
                                         double omega_m) {
    const double ka = kappas[0], kb = kappas[1], km = kappas[2];
    if (ka < 0 || kb < 0 || km < 0)
        throw std::invalid_argument("classical_amplitudes: negative decay");
    if (!(omega_m > 0))
        throw std::invalid_argument("classical_amplitudes: omega_m must be > 0");
    const cplx I(0.0, 1.0);

    // stationary conditions (drive terms on the right):
    //   (i delta_a' + kappa_a) alpha = -i rabi_a,  delta_a' = delta_a - 2 g_a Re M
    //   (i delta_b' + kappa_b) beta  = -i rabi_b,  delta_b' = delta_b - 2 g_b Re M
    //   (i omega_m + kappa_m) M      = -i (g_a |alpha|^2 + g_b |beta|^2)
    // solved by damped fixed-point iteration from the M = 0 seed
    cplx alpha = -I * dp.rabi_a / (I * dp.delta_a + ka);
    cplx beta = -I * dp.rabi_b / (I * dp.delta_b + kb);
    cplx M = 0.0;

    const double damp = 0.5;
    const int max_iter = 10000;
    const double tol = 1e-10;
    double res = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        double da = dp.delta_a - 2.0 * dp.g_a * M.real();
        double db = dp.delta_b - 2.0 * dp.g_b * M.real();
        cplx alpha_new = -I * dp.rabi_a / (I * da + ka);
        cplx beta_new = -I * dp.rabi_b / (I * db + kb);
        cplx m_new = -I *
                     (dp.g_a * std::norm(alpha_new) + dp.g_b * std::norm(beta_new)) /
                     (I * omega_m + km);
        alpha += damp * (alpha_new - alpha);
        beta += damp * (beta_new - beta);
        M += damp * (m_new - M);

        // residuals of the stationary conditions, normalized per equation
        // (absolute 1e-10 is unreachable in doubles at large drive amplitudes)
        da = dp.delta_a - 2.0 * dp.g_a * M.real();
        db = dp.delta_b - 2.0 * dp.g_b * M.real();
        double ra = std::abs((I * da + ka) * alpha + I * dp.rabi_a) /
                    std::max(std::abs(dp.rabi_a), 1.0);
        double rb = std::abs((I * db + kb) * beta + I * dp.rabi_b) /
                    std::max(std::abs(dp.rabi_b), 1.0);
        double drive_m =
            dp.g_a * std::norm(alpha) + dp.g_b * std::norm(beta);
        double rm = std::abs((I * omega_m + km) * M + I * drive_m) /
                    std::max(std::abs(drive_m), 1.0);
        res = std::max({ra, rb, rm});
        if (res < tol)
            return ClassicalAmplitudes{alpha, beta, M, it, res};
    }
    std::ostringstream os;
    os << "classical_amplitudes: residual " << res << " after " << max_iter
       << " iterations";
    throw NonConvergence(os.str());
}

EnhancedCouplings enhanced_couplings(const DriveParams& dp,
                                     const ClassicalAmplitudes& amps) {
    EnhancedCouplings ec;
    ec.g = std::abs(dp.g_a * amps.alpha);
    ec.G = std::abs(dp.g_b * amps.beta);
    ec.theta_a = std::arg(amps.alpha);
    ec.theta_b = std::arg(amps.beta);
    return ec;
}

EffectiveCoupling effective_coupling(const SystemParams& p) {
    double denom = p.delta_b * p.delta_b - 1.0;
    if (std::abs(denom) < 1e-12) {
        std::ostringstream os;
        os << "effective_coupling: delta_b = " << p.delta_b
           << " is resonant with the mechanics";
        throw SingularDetuning(os.str());
    }
    EffectiveCoupling ec;
    ec.g_eff = std::abs(2.0 * p.g * p.G / denom);
    ec.delta = -2.0 * (p.g * p.g + p.G * p.G) / denom;
    return ec;
}

EffectiveParams effective_params(const SystemParams& p) {
    EffectiveParams ep;
    ep.g_eff = effective_coupling(p).g_eff;
    ep.kappa_a = p.kappa_a;
    ep.kappa_b = p.kappa_b;
    ep.n_a = p.n_a;
    ep.n_b = p.n_b;
    return ep;
}

double bogoliubov_r(double g, double G) {
    if (G < 0.0 || !(g > G)) {
        std::ostringstream os;
        os << "bogoliubov_r: need g > G >= 0, got g = " << g << ", G = " << G;
        throw InvalidRatio(os.str());
    }
    return std::atanh(G / g);
}

SystemParams apply_systematic_error(const SystemParams& p,
                                    const ErrorCoeffs& e) {
    SystemParams q = p;
    q.g = p.g * (1.0 + e.gamma);
    q.G = p.G * (1.0 - e.gamma);
    q.delta_a = p.delta_a * (1.0 + e.eta);
    q.delta_b = p.delta_b * (1.0 - e.eta);
    return q;
}

} // namespace tmsq
