#include "tmsq/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "tmsq/errors.hpp"

namespace tmsq {

namespace {

void require_square_same(const Mat& a, const Mat& d, const Mat& v0) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("drift matrix is not square");
    if (d.rows() != a.rows() || d.cols() != a.cols())
        throw DimensionMismatch("diffusion matrix size does not match drift");
    if (v0.rows() != a.rows() || v0.cols() != a.cols())
        throw DimensionMismatch("initial covariance size does not match drift");
}

void check_finite(const Mat& v, const char* where) {
    if (!v.allFinite() || v.cwiseAbs().maxCoeff() > 1e300) {
        std::ostringstream os;
        os << where << ": covariance left the representable range";
        throw NonFiniteResult(os.str());
    }
}

} // namespace

namespace {

// doubled system [[A, D], [0, -A^T]]: its exponential packs the
// homogeneous propagator and the inhomogeneous integral in one shot,
//   V(t) = F11 V0 F11^T + F12 F11^T
void van_loan_blocks(const Mat& a, const Mat& d, double t, Mat& f11,
                     Mat& f12) {
    const Eigen::Index n = a.rows();
    Mat b = Mat::Zero(2 * n, 2 * n);
    b.topLeftCorner(n, n) = a;
    b.topRightCorner(n, n) = d;
    b.bottomRightCorner(n, n) = -a.transpose();
    Mat f = (b * t).exp();
    f11 = f.topLeftCorner(n, n);
    f12 = f.topRightCorner(n, n);
}

} // namespace

Mat evolve(const Mat& a, const Mat& d, const Mat& v0, double t) {
    require_square_same(a, d, v0);
    if (!std::isfinite(t))
        throw std::invalid_argument("evolve: non-finite time");
    Mat f11, f12;
    van_loan_blocks(a, d, t, f11, f12);
    Mat v = f11 * v0 * f11.transpose() + f12 * f11.transpose();
    v = 0.5 * (v + v.transpose()).eval();
    check_finite(v, "evolve");
    return v;
}

Propagator::Propagator(Mat a, Mat d)
    : a_(std::move(a)), d_(std::move(d)),
      dt_cached_(std::numeric_limits<double>::quiet_NaN()) {
    if (a_.rows() != a_.cols() || d_.rows() != a_.rows() ||
        d_.cols() != a_.cols())
        throw DimensionMismatch("Propagator: inconsistent matrix sizes");
}

Mat Propagator::step(const Mat& v, double dt) {
    if (v.rows() != a_.rows() || v.cols() != a_.cols())
        throw DimensionMismatch("Propagator: covariance size mismatch");
    if (!std::isfinite(dt))
        throw std::invalid_argument("Propagator: non-finite step");
    if (dt != dt_cached_) {
        van_loan_blocks(a_, d_, dt, f11_, f12_);
        dt_cached_ = dt;
    }
    Mat out = f11_ * v * f11_.transpose() + f12_ * f11_.transpose();
    out = 0.5 * (out + out.transpose()).eval();
    check_finite(out, "Propagator::step");
    return out;
}

CovarianceState evolve(const DriftMatrix& a, const DiffusionMatrix& d,
                       const CovarianceState& v0, double t) {
    if (a.basis != d.basis || a.basis != v0.basis)
        throw DimensionMismatch("evolve: mixed bases");
    return CovarianceState{evolve(a.a, d.d, v0.v, t), v0.t + t, a.basis};
}

Mat evolve_rk4(const Mat& a, const Mat& d, const Mat& v0, double t,
               int steps) {
    require_square_same(a, d, v0);
    if (steps < 1)
        throw std::invalid_argument("evolve_rk4: steps must be >= 1");
    if (!std::isfinite(t))
        throw std::invalid_argument("evolve_rk4: non-finite time");
    const double h = t / steps;
    auto deriv = [&](const Mat& v) -> Mat {
        return a * v + v * a.transpose() + d;
    };
    Mat v = v0;
    for (int s = 0; s < steps; ++s) {
        Mat k1 = deriv(v);
        Mat k2 = deriv(v + 0.5 * h * k1);
        Mat k3 = deriv(v + 0.5 * h * k2);
        Mat k4 = deriv(v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v = 0.5 * (v + v.transpose()).eval();
    check_finite(v, "evolve_rk4");
    return v;
}

Mat steady_state(const Mat& a, const Mat& d) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("drift matrix is not square");
    if (d.rows() != a.rows() || d.cols() != a.cols())
        throw DimensionMismatch("diffusion matrix size does not match drift");
    const Eigen::Index n = a.rows();

    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    double max_re = es.eigenvalues().real().maxCoeff();
    if (max_re >= -1e-12) {
        std::ostringstream os;
        os << "steady_state: drift is not Hurwitz (max Re eig = " << max_re
           << ")";
        throw Unstable(os.str());
    }

    // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec
    Mat eye = Mat::Identity(n, n);
    Mat lhs = Eigen::kroneckerProduct(eye, a).eval() +
              Eigen::kroneckerProduct(a, eye).eval();
    Vec rhs = -Eigen::Map<const Vec>(d.data(), n * n);
    Vec sol = lhs.partialPivLu().solve(rhs);
    Mat v = Eigen::Map<const Mat>(sol.data(), n, n);
    v = 0.5 * (v + v.transpose()).eval();
    check_finite(v, "steady_state");

    double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    double res = (a * v + v * a.transpose() + d).cwiseAbs().maxCoeff();
    if (res > 1e-10 * scale) {
        std::ostringstream os;
        os << "steady_state: Lyapunov residual " << res
           << " exceeds tolerance";
        throw NonFiniteResult(os.str());
    }
    return v;
}

CovarianceState steady_state(const DriftMatrix& a, const DiffusionMatrix& d) {
    if (a.basis != d.basis)
        throw DimensionMismatch("steady_state: mixed bases");
    return CovarianceState{steady_state(a.a, d.d),
                           std::numeric_limits<double>::infinity(), a.basis};
}

AnalyticCoefficients analytic_coefficients(const EffectiveParams& p) {
    const double g = p.g_eff, ka = p.kappa_a, kb = p.kappa_b;
    if (ka < 0 || kb < 0)
        throw std::invalid_argument("analytic_coefficients: negative decay");
    if (g * g == ka * kb) {
        std::ostringstream os;
        os << "analytic_coefficients: g_eff^2 = kappa_a kappa_b = " << g * g
           << " sits on the stability pole";
        throw StabilityPole(os.str());
    }
    AnalyticCoefficients c;
    const double dk = ka - kb;
    c.omega = std::hypot(2.0 * g, dk);
    if (c.omega == 0.0) {
        c.sin_phi = 0.0; // uncoupled, equal-decay corner; any angle works
        c.cos_phi = 1.0;
    } else {
        c.sin_phi = dk / c.omega;
        c.cos_phi = 2.0 * g / c.omega;
    }
    c.phi_tilde = 0.5 * std::atan2(2.0 * g, dk);
    c.n_plus = p.n_a + p.n_b;
    c.n_minus = p.n_a - p.n_b;
    c.kappa_plus = ka * (2.0 * p.n_a + 1.0) + kb * (2.0 * p.n_b + 1.0);
    c.kappa_minus = ka * (2.0 * p.n_a + 1.0) - kb * (2.0 * p.n_b + 1.0);
    const double ksum = ka + kb;
    c.c_zero = 0.5 * c.cos_phi * (c.kappa_minus / ksum - c.n_minus);
    c.c_plus = (c.kappa_plus - c.sin_phi * c.kappa_minus) /
                   (4.0 * (c.omega - ksum)) +
               (c.n_plus - c.sin_phi * c.n_minus + 1.0) / 4.0;
    c.c_minus = -(c.kappa_plus + c.sin_phi * c.kappa_minus) /
                    (4.0 * (c.omega + ksum)) +
                (c.n_plus + c.sin_phi * c.n_minus + 1.0) / 4.0;
    c.c = g * ka * kb * (p.n_a + p.n_b + 1.0) / ((g * g - ka * kb) * ksum);
    c.c_a = p.n_a + 0.5 - (g / ka) * c.c;
    c.c_b = p.n_b + 0.5 - (g / kb) * c.c;
    return c;
}

CovarianceState analytic_eff_cm(const EffectiveParams& p, double t) {
    AnalyticCoefficients c = analytic_coefficients(p);
    const double ksum = p.kappa_a + p.kappa_b;
    const double ep = std::exp((c.omega - ksum) * t);  // growing branch
    const double e0 = std::exp(-ksum * t);
    const double em = std::exp(-(c.omega + ksum) * t); // decaying branch

    double v11 = c.c_plus * (1.0 - c.sin_phi) * ep -
                 c.c_zero * c.cos_phi * e0 +
                 c.c_minus * (1.0 + c.sin_phi) * em + c.c_a;
    double v44 = c.c_plus * (1.0 + c.sin_phi) * ep +
                 c.c_zero * c.cos_phi * e0 +
                 c.c_minus * (1.0 - c.sin_phi) * em + c.c_b;
    double v14 = -c.c_plus * c.cos_phi * ep + c.c_zero * c.sin_phi * e0 +
                 c.c_minus * c.cos_phi * em + c.c;

    Mat v = Mat::Zero(4, 4);
    v(0, 0) = v(1, 1) = v11;
    v(2, 2) = v(3, 3) = v44;
    v(0, 3) = v(3, 0) = v14;
    v(1, 2) = v(2, 1) = v14;
    check_finite(v, "analytic_eff_cm");
    return CovarianceState{std::move(v), t, Basis::Effective4};
}

Mat reservoir_steady_elements(double g, double G, double kappa_a,
                              double kappa_m) {
    if (!(g > 0.0) || G < 0.0 || !(G < g)) {
        std::ostringstream os;
        os << "reservoir_steady_elements: closed form needs g > G >= 0, got "
              "g = "
           << g << ", G = " << G;
        throw InvalidRegime(os.str());
    }
    if (!(kappa_a > 0.0) || kappa_m < 0.0)
        throw std::invalid_argument(
            "reservoir_steady_elements: need kappa_a > 0, kappa_m >= 0");

    const double g2 = g * g, G2 = G * G;
    const double ka = kappa_a, km = kappa_m;
    const double vden = (ka + km) * (G2 - g2 - ka * km) *
                        (G2 - g2 - 2.0 * ka * (ka + km));

    const double v11 = 0.5 + G2 * g2 * (km + 2.0 * ka) / vden;
    const double v33 =
        0.5 + G2 * (2.0 * (ka + km) * (g2 + ka * km) - G2 * km) / vden;
    const double v66 =
        0.5 + G2 * ka * (g2 - G2 + 2.0 * ka * (ka + km)) / vden;
    const double v13 =
        -G * g * (G2 * ka + (g2 + ka * km) * (ka + km)) / vden;
    const double v16 = g * G2 * ka * (2.0 * ka + km) / vden;
    const double v36 =
        -G * (2.0 * ka * (ka + km) * (g2 + ka * km) - G2 * ka * km) / vden;

    Mat v = Mat::Zero(6, 6);
    v(0, 0) = v(1, 1) = v11;
    v(2, 2) = v(3, 3) = v33;
    v(4, 4) = v(5, 5) = v66;
    v(0, 2) = v(2, 0) = v13;
    v(1, 3) = v(3, 1) = -v13;
    v(0, 5) = v(5, 0) = v16;
    v(1, 4) = v(4, 1) = -v16;
    v(2, 5) = v(5, 2) = v36;
    v(3, 4) = v(4, 3) = v36;
    check_finite(v, "reservoir_steady_elements");
    return v;
}

StabilityReport classify_stability(const Mat& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("classify_stability: matrix is not square");
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    StabilityReport r;
    r.max_re_eig = es.eigenvalues().real().maxCoeff();
    if (r.max_re_eig > 1e-12)
        r.cls = StabilityClass::unstable;
    else if (r.max_re_eig < -1e-12)
        r.cls = StabilityClass::stable;
    else
        r.cls = StabilityClass::marginal;
    return r;
}

StabilityReport classify_stability(const DriftMatrix& a) {
    return classify_stability(a.a);
}

StabilityReport effective_stability(double g_eff, double kappa_a,
                                    double kappa_b) {
    // spectrum of the effective drift in closed form:
    // -(ka+kb)/2 +- sqrt((ka-kb)^2/4 + g_eff^2), each twice
    StabilityReport r;
    r.max_re_eig = -0.5 * (kappa_a + kappa_b) +
                   std::hypot(0.5 * (kappa_a - kappa_b), g_eff);
    if (r.max_re_eig > 1e-12)
        r.cls = StabilityClass::unstable;
    else if (r.max_re_eig < -1e-12)
        r.cls = StabilityClass::stable;
    else
        r.cls = StabilityClass::marginal;
    return r;
}

} // namespace tmsq
