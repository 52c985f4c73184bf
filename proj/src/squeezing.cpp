#include "tmsq/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tmsq/dynamics.hpp"
#include "tmsq/errors.hpp"

namespace tmsq {

namespace {

constexpr double pi = 3.14159265358979323846;

// photonic 4x4 block of a covariance in either basis
Mat photonic_block(const Mat& v) {
    if (v.rows() == 4 && v.cols() == 4) return v;
    if (v.rows() == 6 && v.cols() == 6) return v.topLeftCorner(4, 4);
    std::ostringstream os;
    os << "expected a 4x4 or 6x6 covariance, got " << v.rows() << "x"
       << v.cols();
    throw DimensionMismatch(os.str());
}

} // namespace

QuadratureSpec QuadratureSpec::from_angles(double phi1, double phi2,
                                           double phi3) {
    QuadratureSpec s;
    s.coeffs << std::cos(phi3) * std::cos(phi1),
        std::cos(phi3) * std::sin(phi1), std::sin(phi3) * std::cos(phi2),
        std::sin(phi3) * std::sin(phi2);
    return s;
}

std::array<double, 3> QuadratureSpec::angles() const {
    Eigen::Vector4d w = coeffs;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(w(i)) > 1e-12) {
            if (w(i) < 0) w = -w;
            break;
        }
    }
    double ra = std::hypot(w(0), w(1));
    double rb = std::hypot(w(2), w(3));
    double phi3 = std::atan2(rb, ra);
    double phi1 = ra < 1e-15 ? 0.0 : std::atan2(w(1), w(0));
    double phi2 = rb < 1e-15 ? 0.0 : std::atan2(w(3), w(2));
    return {phi1, phi2, phi3};
}

OptimalAngle optimal_angle(double g_eff, double kappa_a, double kappa_b) {
    double y = 2.0 * g_eff, x = kappa_a - kappa_b;
    if (y == 0.0 && x == 0.0) return OptimalAngle{pi / 4.0, true};
    return OptimalAngle{0.5 * std::atan2(y, x), false};
}

double variance_X_inf(const EffectiveParams& p) {
    AnalyticCoefficients c = analytic_coefficients(p);
    return (c.kappa_plus + c.sin_phi * c.kappa_minus) /
           (2.0 * (c.omega + p.kappa_a + p.kappa_b));
}

double variance_X(const EffectiveParams& p, double t) {
    AnalyticCoefficients c = analytic_coefficients(p);
    double rate = c.omega + p.kappa_a + p.kappa_b;
    return 2.0 * c.c_minus * std::exp(-rate * t) +
           (c.kappa_plus + c.sin_phi * c.kappa_minus) / (2.0 * rate);
}

double variance_Y(const EffectiveParams& p, double t) {
    AnalyticCoefficients c = analytic_coefficients(p);
    double rate = c.omega - p.kappa_a - p.kappa_b; // grows when unstable
    return 2.0 * c.c_plus * std::exp(rate * t) +
           (c.n_plus + 1.0 + c.sin_phi * c.n_minus) / 2.0 - 2.0 * c.c_plus;
}

double variance_from_cm(const Mat& v, const QuadratureSpec& spec) {
    Mat v4 = photonic_block(v);
    const Eigen::Vector4d& w = spec.coeffs;
    double norm = w.norm();
    if (std::abs(norm - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "variance_from_cm: quadrature coefficients have norm " << norm;
        throw std::invalid_argument(os.str());
    }
    return w.dot(v4 * w);
}

SqueezeReport optimize_quadrature(const Mat& v, double t) {
    Mat v4 = photonic_block(v);
    v4 = 0.5 * (v4 + v4.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(v4);
    SqueezeReport rep;
    rep.t = t;
    rep.delta_x = es.eigenvalues()(0); // ascending order
    Eigen::Vector4d w = es.eigenvectors().col(0);
    rep.spec.coeffs = w / w.norm();
    auto ang = rep.spec.angles();
    rep.spec = QuadratureSpec::from_angles(ang[0], ang[1], ang[2]);
    rep.level_db = squeezing_level(rep.delta_x);
    return rep;
}

SqueezeReport optimize_quadrature_numeric(const Mat& v, double t,
                                          double grid_step_deg) {
    Mat v4 = photonic_block(v);
    v4 = 0.5 * (v4 + v4.transpose()).eval();
    if (!(grid_step_deg > 0))
        throw std::invalid_argument("grid step must be positive");

    auto f = [&](const Eigen::Vector3d& a) {
        QuadratureSpec s = QuadratureSpec::from_angles(a(0), a(1), a(2));
        return s.coeffs.dot(v4 * s.coeffs);
    };

    // coarse exhaustive pass over the three angles
    const double step = grid_step_deg * pi / 180.0;
    Eigen::Vector3d best(0, 0, 0);
    double fbest = f(best);
    for (double p3 = 0.0; p3 <= pi / 2 + 1e-12; p3 += step)
        for (double p1 = 0.0; p1 < 2 * pi; p1 += step)
            for (double p2 = 0.0; p2 < 2 * pi; p2 += step) {
                Eigen::Vector3d a(p1, p2, p3);
                double fa = f(a);
                if (fa < fbest) {
                    fbest = fa;
                    best = a;
                }
            }

    // Nelder-Mead polish (reflection 1, expansion 2, contraction 0.5,
    // shrink 0.5)
    std::array<Eigen::Vector3d, 4> xs;
    std::array<double, 4> fs;
    xs[0] = best;
    fs[0] = fbest;
    for (int i = 0; i < 3; ++i) {
        xs[i + 1] = best;
        xs[i + 1](i) += step;
        fs[i + 1] = f(xs[i + 1]);
    }
    auto order = [&] {
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Eigen::Vector3d, 4> x2;
        std::array<double, 4> f2;
        for (int i = 0; i < 4; ++i) {
            x2[i] = xs[idx[i]];
            f2[i] = fs[idx[i]];
        }
        xs = x2;
        fs = f2;
    };
    order();
    for (int it = 0; it < 400; ++it) {
        double fspread = std::abs(fs[3] - fs[0]);
        double xspread = 0.0;
        for (int i = 1; i < 4; ++i)
            xspread = std::max(xspread, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
        if (fspread < 1e-14 && xspread < 1e-12) break;
        Eigen::Vector3d centroid = (xs[0] + xs[1] + xs[2]) / 3.0;
        Eigen::Vector3d xr = centroid + (centroid - xs[3]);
        double fr = f(xr);
        if (fr < fs[0]) {
            Eigen::Vector3d xe = centroid + 2.0 * (centroid - xs[3]);
            double fe = f(xe);
            if (fe < fr) {
                xs[3] = xe;
                fs[3] = fe;
            } else {
                xs[3] = xr;
                fs[3] = fr;
            }
        } else if (fr < fs[2]) {
            xs[3] = xr;
            fs[3] = fr;
        } else {
            Eigen::Vector3d xc = centroid + 0.5 * (xs[3] - centroid);
            double fc = f(xc);
            if (fc < fs[3]) {
                xs[3] = xc;
                fs[3] = fc;
            } else {
                for (int i = 1; i < 4; ++i) {
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
                    fs[i] = f(xs[i]);
                }
            }
        }
        order();
    }

    SqueezeReport rep;
    rep.t = t;
    rep.delta_x = fs[0];
    rep.spec = QuadratureSpec::from_angles(xs[0](0), xs[0](1), xs[0](2));
    auto ang = rep.spec.angles();
    rep.spec = QuadratureSpec::from_angles(ang[0], ang[1], ang[2]);
    rep.level_db = squeezing_level(rep.delta_x);
    return rep;
}

double squeezing_level(double delta) {
    if (!(delta > 0.0)) {
        std::ostringstream os;
        os << "squeezing_level: variance " << delta << " is not positive";
        throw NonPositiveVariance(os.str());
    }
    return -10.0 * std::log10(delta / 0.5);
}

double anti_squeezing_level(double delta) {
    if (!(delta > 0.0)) {
        std::ostringstream os;
        os << "anti_squeezing_level: variance " << delta
           << " is not positive";
        throw NonPositiveVariance(os.str());
    }
    return 10.0 * std::log10(delta / 0.5);
}

RelativeSlErrors relative_sl_errors(double s_lin, double s_tilde_lin,
                                    double s_eff) {
    if (s_eff == 0.0)
        throw ZeroReference("relative_sl_errors: reference level is zero");
    RelativeSlErrors e;
    e.eps = std::abs(s_lin - s_eff) / std::abs(s_eff);
    e.eps_tilde = std::abs(s_tilde_lin - s_eff) / std::abs(s_eff);
    return e;
}

double tau(const EffectiveParams& p) {
    double omega = std::hypot(2.0 * p.g_eff, p.kappa_a - p.kappa_b);
    double rate = omega + p.kappa_a + p.kappa_b;
    if (!(rate > 0.0))
        throw std::invalid_argument("tau: all rates vanish");
    return 2.0 * pi / rate;
}

} // namespace tmsq
