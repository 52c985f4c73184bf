#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tmsq {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using cplx = std::complex<double>;

// Everything is expressed in units of the mechanical frequency:
// omega_m = 1, times in 1/omega_m, rates and detunings in omega_m.

enum class Basis {
    Full6,      // (X_a, Y_a, X_b, Y_b, X_m, Y_m)
    Effective4, // (X_a, Y_a, X_b, Y_b)
};

inline int basis_dim(Basis b) { return b == Basis::Full6 ? 6 : 4; }

inline const std::vector<std::string>& basis_labels(Basis b) {
    static const std::vector<std::string> full = {"X_a", "Y_a", "X_b",
                                                  "Y_b", "X_m", "Y_m"};
    static const std::vector<std::string> eff = {"X_a", "Y_a", "X_b", "Y_b"};
    return b == Basis::Full6 ? full : eff;
}

// Dimensionless parameters of the linearized three-mode model.
struct SystemParams {
    double delta_a = 0.0; // cavity a detuning
    double delta_b = 0.0; // cavity b detuning
    double g = 0.0;       // enhanced coupling, mode a <-> mechanics
    double G = 0.0;       // enhanced coupling, mode b <-> mechanics
    double theta_a = 0.0; // drive phase picked up by g (kept for bookkeeping)
    double theta_b = 0.0;
    double kappa_a = 0.0; // amplitude decay rates
    double kappa_b = 0.0;
    double kappa_m = 0.0;
    double n_a = 0.0; // bath occupations
    double n_b = 0.0;
    double n_m = 0.0;

    // throws std::invalid_argument on unphysical entries
    void validate() const;

    // large-detuning regime check: |delta_b - 1| >= 8 g and 0.1 <= g <= 0.2.
    // Informational only, nothing enforces it.
    bool effective_model_valid() const {
        return std::abs(delta_b - 1.0) >= 8.0 * g && g >= 0.1 && g <= 0.2;
    }
};

// Reduced parameter set of the two-mode effective model.
struct EffectiveParams {
    double g_eff = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
};

// Lab-frame scales, used only to turn temperatures into occupations.
struct PhysicalParams {
    double omega_a_hz = 0.0;
    double omega_b_hz = 0.0;
    double omega_m_hz = 0.0;
    double temp_k = 0.0;
};

// Drive-level inputs for the classical working point.
struct DriveParams {
    double g_a = 0.0; // single-photon couplings
    double g_b = 0.0;
    double rabi_a = 0.0; // drive amplitudes
    double rabi_b = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
};

struct ClassicalAmplitudes {
    cplx alpha{0.0, 0.0}; // cavity a
    cplx beta{0.0, 0.0};  // cavity b
    cplx M{0.0, 0.0};     // mechanical displacement
    int iterations = 0;
    double residual = 0.0;
};

// Fractional miscalibrations: g -> g(1+gamma), G -> G(1-gamma),
// delta_a -> delta_a(1+eta), delta_b -> delta_b(1-eta).
struct ErrorCoeffs {
    double gamma = 0.0;
    double eta = 0.0;
};

// Drift/diffusion matrices tagged with the quadrature basis they live in.
struct DriftMatrix {
    Mat a;
    Basis basis = Basis::Full6;
};

struct DiffusionMatrix {
    Mat d;
    Basis basis = Basis::Full6;
};

struct CovarianceState {
    Mat v;
    double t = 0.0;
    Basis basis = Basis::Full6;
};

// Generalized two-mode quadrature
//   O = c1 X_a + c2 Y_a + c3 X_b + c4 Y_b,  |c| = 1,
// parameterized as (cos f3 cos f1, cos f3 sin f1, sin f3 cos f2, sin f3 sin f2).
struct QuadratureSpec {
    Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();

    static QuadratureSpec from_angles(double phi1, double phi2, double phi3);
    // recover (phi1, phi2, phi3); sign-normalized so the first
    // non-negligible coefficient is positive
    std::array<double, 3> angles() const;
};

struct SqueezeReport {
    double t = 0.0;
    double delta_x = 0.0;  // minimized variance
    double level_db = 0.0; // -10 log10(delta_x / 0.5)
    QuadratureSpec spec;   // minimizing quadrature
};

// Ingredients of the closed-form effective-model covariance.
struct AnalyticCoefficients {
    double omega = 0.0;     // hypot(2 g_eff, kappa_a - kappa_b)
    double sin_phi = 0.0;   // (kappa_a - kappa_b) / omega
    double cos_phi = 0.0;   // 2 g_eff / omega
    double phi_tilde = 0.0; // Bogoliubov mixing angle, atan2(2 g_eff, dk)/2
    double c_plus = 0.0;
    double c_minus = 0.0;
    double c_zero = 0.0;
    double kappa_plus = 0.0;  // kappa_a(2n_a+1) + kappa_b(2n_b+1)
    double kappa_minus = 0.0; // kappa_a(2n_a+1) - kappa_b(2n_b+1)
    double n_plus = 0.0;      // n_a + n_b
    double n_minus = 0.0;     // n_a - n_b
    double c = 0.0;           // steady cross correlation <X_a X_b>
    double c_a = 0.0;         // steady V11
    double c_b = 0.0;         // steady V44
};

enum class StabilityClass { stable, marginal, unstable };

struct StabilityReport {
    StabilityClass cls = StabilityClass::stable;
    double max_re_eig = 0.0;
};

struct OptimalAngle {
    double phi_tilde = 0.0;
    bool degenerate = false; // g_eff = 0 and kappa_a = kappa_b: any angle works
};

// One tracked eigenvalue branch of a detuning scan.
struct EigenBranch {
    std::vector<cplx> values; // one per grid point
};

struct ScanResult {
    std::vector<double> grid;         // delta_a values
    std::array<EigenBranch, 6> branches;
};

struct GeffExtraction {
    double g_eff_num = 0.0; // refined max of |Im lambda| over the scan window
    double delta_num = 0.0; // location of the max relative to -delta_b
    double g_eff_ana = 0.0;
    double delta_ana = 0.0;
    double sigma = 0.0; // |g_eff_num - g_eff_ana| / |g_eff_ana|
};

} // namespace tmsq
