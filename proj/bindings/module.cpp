#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "tmsq/dynamics.hpp"
#include "tmsq/errors.hpp"
#include "tmsq/experiments.hpp"
#include "tmsq/matrices.hpp"
#include "tmsq/model.hpp"
#include "tmsq/spectral.hpp"
#include "tmsq/squeezing.hpp"

namespace py = pybind11;
using namespace tmsq;

namespace {

// dict <-> nlohmann round trip through the stdlib json module; slow but
// foolproof, and configs are tiny
json to_json(const py::handle& obj) {
    auto dumps = py::module_::import("json").attr("dumps");
    return json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const json& j) {
    auto loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

json overrides_or_empty(const py::object& overrides) {
    return overrides.is_none() ? json::object() : to_json(overrides);
}

RunConfig config_from_obj(const py::object& cfg) {
    return cfg.is_none() ? default_config() : config_from_json(to_json(cfg));
}

} // namespace

PYBIND11_MODULE(_tmsq, m) {
    m.doc() = "simulator for mechanically mediated two-mode squeezing in a "
              "three-mode optomechanical cavity";
    m.attr("__version__") = version();
    m.def("version", &version, "library version string");

    // exceptions; the base goes first so subclass translators take precedence
    auto err = py::register_exception<Error>(m, "Error");
    py::register_exception<NonConvergence>(m, "NonConvergence", err.ptr());
    py::register_exception<SingularDetuning>(m, "SingularDetuning", err.ptr());
    py::register_exception<InvalidRatio>(m, "InvalidRatio", err.ptr());
    py::register_exception<AmbiguousTracking>(m, "AmbiguousTracking", err.ptr());
    py::register_exception<NoSplittingFound>(m, "NoSplittingFound", err.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", err.ptr());
    py::register_exception<NonFiniteResult>(m, "NonFiniteResult", err.ptr());
    py::register_exception<Unstable>(m, "Unstable", err.ptr());
    py::register_exception<StabilityPole>(m, "StabilityPole", err.ptr());
    py::register_exception<InvalidRegime>(m, "InvalidRegime", err.ptr());
    py::register_exception<NonPositiveVariance>(m, "NonPositiveVariance", err.ptr());
    py::register_exception<ZeroReference>(m, "ZeroReference", err.ptr());
    py::register_exception<UnknownFigure>(m, "UnknownFigure", err.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", err.ptr());

    py::enum_<Basis>(m, "Basis")
        .value("Full6", Basis::Full6)
        .value("Effective4", Basis::Effective4);

    py::enum_<StabilityClass>(m, "StabilityClass")
        .value("stable", StabilityClass::stable)
        .value("marginal", StabilityClass::marginal)
        .value("unstable", StabilityClass::unstable);

    m.def("basis_labels", &basis_labels, py::arg("basis"));

    // ---- parameter structs -------------------------------------------
    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("delta_a", &SystemParams::delta_a)
        .def_readwrite("delta_b", &SystemParams::delta_b)
        .def_readwrite("g", &SystemParams::g)
        .def_readwrite("G", &SystemParams::G)
        .def_readwrite("theta_a", &SystemParams::theta_a)
        .def_readwrite("theta_b", &SystemParams::theta_b)
        .def_readwrite("kappa_a", &SystemParams::kappa_a)
        .def_readwrite("kappa_b", &SystemParams::kappa_b)
        .def_readwrite("kappa_m", &SystemParams::kappa_m)
        .def_readwrite("n_a", &SystemParams::n_a)
        .def_readwrite("n_b", &SystemParams::n_b)
        .def_readwrite("n_m", &SystemParams::n_m)
        .def("validate", &SystemParams::validate)
        .def("effective_model_valid", &SystemParams::effective_model_valid);

    py::class_<EffectiveParams>(m, "EffectiveParams")
        .def(py::init<>())
        .def_readwrite("g_eff", &EffectiveParams::g_eff)
        .def_readwrite("kappa_a", &EffectiveParams::kappa_a)
        .def_readwrite("kappa_b", &EffectiveParams::kappa_b)
        .def_readwrite("n_a", &EffectiveParams::n_a)
        .def_readwrite("n_b", &EffectiveParams::n_b);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_readwrite("omega_a_hz", &PhysicalParams::omega_a_hz)
        .def_readwrite("omega_b_hz", &PhysicalParams::omega_b_hz)
        .def_readwrite("omega_m_hz", &PhysicalParams::omega_m_hz)
        .def_readwrite("temp_k", &PhysicalParams::temp_k);

    py::class_<DriveParams>(m, "DriveParams")
        .def(py::init<>())
        .def_readwrite("g_a", &DriveParams::g_a)
        .def_readwrite("g_b", &DriveParams::g_b)
        .def_readwrite("rabi_a", &DriveParams::rabi_a)
        .def_readwrite("rabi_b", &DriveParams::rabi_b)
        .def_readwrite("delta_a", &DriveParams::delta_a)
        .def_readwrite("delta_b", &DriveParams::delta_b);

    py::class_<ClassicalAmplitudes>(m, "ClassicalAmplitudes")
        .def_readonly("alpha", &ClassicalAmplitudes::alpha)
        .def_readonly("beta", &ClassicalAmplitudes::beta)
        .def_readonly("M", &ClassicalAmplitudes::M)
        .def_readonly("iterations", &ClassicalAmplitudes::iterations)
        .def_readonly("residual", &ClassicalAmplitudes::residual);

    py::class_<EnhancedCouplings>(m, "EnhancedCouplings")
        .def_readonly("g", &EnhancedCouplings::g)
        .def_readonly("theta_a", &EnhancedCouplings::theta_a)
        .def_readonly("G", &EnhancedCouplings::G)
        .def_readonly("theta_b", &EnhancedCouplings::theta_b);

    py::class_<EffectiveCoupling>(m, "EffectiveCoupling")
        .def_readonly("g_eff", &EffectiveCoupling::g_eff)
        .def_readonly("delta", &EffectiveCoupling::delta);

    py::class_<ErrorCoeffs>(m, "ErrorCoeffs")
        .def(py::init<>())
        .def(py::init([](double gamma, double eta) {
                 return ErrorCoeffs{gamma, eta};
             }),
             py::arg("gamma") = 0.0, py::arg("eta") = 0.0)
        .def_readwrite("gamma", &ErrorCoeffs::gamma)
        .def_readwrite("eta", &ErrorCoeffs::eta);

    // ---- matrices and states -----------------------------------------
    py::class_<DriftMatrix>(m, "DriftMatrix")
        .def(py::init([](Mat a, Basis b) {
                 return DriftMatrix{std::move(a), b};
             }),
             py::arg("a"), py::arg("basis") = Basis::Full6)
        .def_readwrite("a", &DriftMatrix::a)
        .def_readwrite("basis", &DriftMatrix::basis);

    py::class_<DiffusionMatrix>(m, "DiffusionMatrix")
        .def(py::init([](Mat d, Basis b) {
                 return DiffusionMatrix{std::move(d), b};
             }),
             py::arg("d"), py::arg("basis") = Basis::Full6)
        .def_readwrite("d", &DiffusionMatrix::d)
        .def_readwrite("basis", &DiffusionMatrix::basis);

    py::class_<CovarianceState>(m, "CovarianceState")
        .def(py::init([](Mat v, double t, Basis b) {
                 return CovarianceState{std::move(v), t, b};
             }),
             py::arg("v"), py::arg("t") = 0.0, py::arg("basis") = Basis::Full6)
        .def_readwrite("v", &CovarianceState::v)
        .def_readwrite("t", &CovarianceState::t)
        .def_readwrite("basis", &CovarianceState::basis);

    // ---- model -------------------------------------------------------
    m.def("thermal_occupation", &thermal_occupation, py::arg("freq_hz"),
          py::arg("temp_k"));
    m.def("classical_amplitudes", &classical_amplitudes, py::arg("drive"),
          py::arg("kappas"), py::arg("omega_m") = 1.0);
    m.def("enhanced_couplings", &enhanced_couplings, py::arg("drive"),
          py::arg("amplitudes"));
    m.def("effective_coupling", &effective_coupling, py::arg("params"));
    m.def("effective_params", &effective_params, py::arg("params"));
    m.def("bogoliubov_r", &bogoliubov_r, py::arg("g"), py::arg("G"));
    m.def("apply_systematic_error", &apply_systematic_error, py::arg("params"),
          py::arg("errors"));

    m.def("build_script_L", &build_script_L, py::arg("params"));
    m.def("build_full_drift", &build_full_drift, py::arg("params"));
    m.def("build_eff_drift",
          py::overload_cast<double, double, double>(&build_eff_drift),
          py::arg("g_eff"), py::arg("kappa_a"), py::arg("kappa_b"));
    m.def("build_eff_drift",
          py::overload_cast<const EffectiveParams&>(&build_eff_drift),
          py::arg("params"));
    m.def("build_reservoir_drift", &build_reservoir_drift, py::arg("params"));
    m.def("build_diffusion", &build_diffusion, py::arg("params"),
          py::arg("basis"));

    // ---- dynamics ----------------------------------------------------
    m.def("evolve",
          py::overload_cast<const Mat&, const Mat&, const Mat&, double>(&evolve),
          py::arg("a"), py::arg("d"), py::arg("v0"), py::arg("t"));
    m.def("evolve",
          py::overload_cast<const DriftMatrix&, const DiffusionMatrix&,
                            const CovarianceState&, double>(&evolve),
          py::arg("a"), py::arg("d"), py::arg("v0"), py::arg("t"));
    m.def("evolve_rk4", &evolve_rk4, py::arg("a"), py::arg("d"), py::arg("v0"),
          py::arg("t"), py::arg("steps"));
    m.def("steady_state",
          py::overload_cast<const Mat&, const Mat&>(&steady_state),
          py::arg("a"), py::arg("d"));
    m.def("steady_state",
          py::overload_cast<const DriftMatrix&, const DiffusionMatrix&>(
              &steady_state),
          py::arg("a"), py::arg("d"));

    py::class_<AnalyticCoefficients>(m, "AnalyticCoefficients")
        .def_readonly("omega", &AnalyticCoefficients::omega)
        .def_readonly("sin_phi", &AnalyticCoefficients::sin_phi)
        .def_readonly("cos_phi", &AnalyticCoefficients::cos_phi)
        .def_readonly("phi_tilde", &AnalyticCoefficients::phi_tilde)
        .def_readonly("c_plus", &AnalyticCoefficients::c_plus)
        .def_readonly("c_minus", &AnalyticCoefficients::c_minus)
        .def_readonly("c_zero", &AnalyticCoefficients::c_zero)
        .def_readonly("kappa_plus", &AnalyticCoefficients::kappa_plus)
        .def_readonly("kappa_minus", &AnalyticCoefficients::kappa_minus)
        .def_readonly("n_plus", &AnalyticCoefficients::n_plus)
        .def_readonly("n_minus", &AnalyticCoefficients::n_minus)
        .def_readonly("c", &AnalyticCoefficients::c)
        .def_readonly("c_a", &AnalyticCoefficients::c_a)
        .def_readonly("c_b", &AnalyticCoefficients::c_b);

    m.def("analytic_coefficients", &analytic_coefficients, py::arg("params"));
    m.def("analytic_eff_cm", &analytic_eff_cm, py::arg("params"), py::arg("t"));
    m.def("reservoir_steady_elements", &reservoir_steady_elements,
          py::arg("g"), py::arg("G"), py::arg("kappa_a"), py::arg("kappa_m"));

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("cls", &StabilityReport::cls)
        .def_readonly("max_re_eig", &StabilityReport::max_re_eig);

    m.def("classify_stability",
          py::overload_cast<const Mat&>(&classify_stability), py::arg("a"));
    m.def("classify_stability",
          py::overload_cast<const DriftMatrix&>(&classify_stability),
          py::arg("a"));
    m.def("effective_stability", &effective_stability, py::arg("g_eff"),
          py::arg("kappa_a"), py::arg("kappa_b"));

    // ---- spectral ----------------------------------------------------
    py::class_<EigenBranch>(m, "EigenBranch")
        .def_readonly("values", &EigenBranch::values);

    py::class_<ScanResult>(m, "ScanResult")
        .def_readonly("grid", &ScanResult::grid)
        .def_readonly("branches", &ScanResult::branches);

    py::class_<GeffExtraction>(m, "GeffExtraction")
        .def_readonly("g_eff_num", &GeffExtraction::g_eff_num)
        .def_readonly("delta_num", &GeffExtraction::delta_num)
        .def_readonly("g_eff_ana", &GeffExtraction::g_eff_ana)
        .def_readonly("delta_ana", &GeffExtraction::delta_ana)
        .def_readonly("sigma", &GeffExtraction::sigma);

    py::class_<SigmaMapResult>(m, "SigmaMapResult")
        .def_readonly("g", &SigmaMapResult::g)
        .def_readonly("delta_b", &SigmaMapResult::delta_b)
        .def_readonly("sigma", &SigmaMapResult::sigma);

    m.def("eigen_scan", &eigen_scan, py::arg("params"), py::arg("grid"));
    m.def("extract_geff_numeric", &extract_geff_numeric, py::arg("params"),
          py::arg("grid"));
    m.def("default_scan_grid", &default_scan_grid, py::arg("params"),
          py::arg("n") = 121);
    m.def("sigma_map", &sigma_map, py::arg("g_range"), py::arg("delta_b_range"));

    // ---- squeezing ---------------------------------------------------
    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("coeffs", &QuadratureSpec::coeffs)
        .def_static("from_angles", &QuadratureSpec::from_angles,
                    py::arg("phi1"), py::arg("phi2"), py::arg("phi3"))
        .def("angles", &QuadratureSpec::angles);

    py::class_<OptimalAngle>(m, "OptimalAngle")
        .def_readonly("phi_tilde", &OptimalAngle::phi_tilde)
        .def_readonly("degenerate", &OptimalAngle::degenerate);

    py::class_<SqueezeReport>(m, "SqueezeReport")
        .def_readonly("t", &SqueezeReport::t)
        .def_readonly("delta_x", &SqueezeReport::delta_x)
        .def_readonly("level_db", &SqueezeReport::level_db)
        .def_readonly("spec", &SqueezeReport::spec);

    py::class_<RelativeSlErrors>(m, "RelativeSlErrors")
        .def_readonly("eps", &RelativeSlErrors::eps)
        .def_readonly("eps_tilde", &RelativeSlErrors::eps_tilde);

    m.def("optimal_angle", &optimal_angle, py::arg("g_eff"), py::arg("kappa_a"),
          py::arg("kappa_b"));
    m.def("variance_X", &variance_X, py::arg("params"), py::arg("t"));
    m.def("variance_X_inf", &variance_X_inf, py::arg("params"));
    m.def("variance_Y", &variance_Y, py::arg("params"), py::arg("t"));
    m.def("variance_from_cm", &variance_from_cm, py::arg("v"), py::arg("spec"));
    m.def("optimize_quadrature", &optimize_quadrature, py::arg("v"),
          py::arg("t") = 0.0);
    m.def("optimize_quadrature_numeric", &optimize_quadrature_numeric,
          py::arg("v"), py::arg("t") = 0.0, py::arg("grid_step_deg") = 2.0);
    m.def("squeezing_level", &squeezing_level, py::arg("delta"));
    m.def("anti_squeezing_level", &anti_squeezing_level, py::arg("delta"));
    m.def("relative_sl_errors", &relative_sl_errors, py::arg("s_lin"),
          py::arg("s_tilde_lin"), py::arg("s_eff"));
    m.def("tau", &tau, py::arg("params"));

    // ---- experiments: configs as plain dicts, results as rows/files ----
    py::class_<SweepErrorRow>(m, "SweepErrorRow")
        .def_readonly("gamma", &SweepErrorRow::gamma)
        .def_readonly("eta", &SweepErrorRow::eta)
        .def_readonly("s_lin", &SweepErrorRow::s_lin)
        .def_readonly("s_tilde_lin", &SweepErrorRow::s_tilde_lin);

    py::class_<ThermalRow>(m, "ThermalRow")
        .def_readonly("temp_k", &ThermalRow::temp_k)
        .def_readonly("n_a", &ThermalRow::n_a)
        .def_readonly("n_b", &ThermalRow::n_b)
        .def_readonly("n_m", &ThermalRow::n_m)
        .def_readonly("s_half", &ThermalRow::s_half)
        .def_readonly("s_tau", &ThermalRow::s_tau)
        .def_readonly("s_threehalf", &ThermalRow::s_threehalf);

    py::class_<BaselineRow>(m, "BaselineRow")
        .def_readonly("g", &BaselineRow::g)
        .def_readonly("ratio", &BaselineRow::ratio)
        .def_readonly("s_db", &BaselineRow::s_db)
        .def_readonly("s_prime_db", &BaselineRow::s_prime_db);

    py::class_<RunOutputs>(m, "RunOutputs")
        .def_readonly("files", &RunOutputs::files)
        .def_readonly("manifest", &RunOutputs::manifest);

    m.def("default_config",
          []() { return from_json(config_to_json(default_config())); });
    m.def(
        "validate_config",
        [](const py::object& cfg) {
            return from_json(config_to_json(config_from_json(to_json(cfg))));
        },
        py::arg("config"),
        "parse a config dict, filling defaults; raises ConfigError on "
        "unknown keys or bad values");

    m.def(
        "sweep_systematic",
        [](const py::object& cfg, const std::vector<double>& gammas,
           const std::vector<double>& etas) {
            return sweep_systematic(config_from_obj(cfg), gammas, etas);
        },
        py::arg("config"), py::arg("gammas"), py::arg("etas"));
    m.def(
        "sweep_thermal",
        [](const py::object& cfg, const std::vector<double>& temps_k) {
            return sweep_thermal(config_from_obj(cfg), temps_k);
        },
        py::arg("config"), py::arg("temps_k"));
    m.def(
        "baseline_reservoir",
        [](const py::object& cfg, const std::vector<double>& ratios) {
            return baseline_reservoir(config_from_obj(cfg), ratios);
        },
        py::arg("config"), py::arg("ratios"));

    auto bind_runner = [&m](const char* name, RunOutputs (*fn)(const RunConfig&)) {
        m.def(
            name,
            [fn](const py::object& cfg) { return fn(config_from_obj(cfg)); },
            py::arg("config") = py::none());
    };
    bind_runner("run_geff_scan", &run_geff_scan);
    bind_runner("run_evolve", &run_evolve);
    bind_runner("run_steady", &run_steady);
    bind_runner("run_squeeze", &run_squeeze);
    bind_runner("run_sweep_error", &run_sweep_error);
    bind_runner("run_sweep_thermal", &run_sweep_thermal);
    bind_runner("run_baseline", &run_baseline);

    m.def("figure_ids", &figure_ids);
    m.def(
        "figure_default_json",
        [](const std::string& fig_id) {
            return from_json(figure_default_json(fig_id));
        },
        py::arg("fig_id"));
    m.def(
        "run_figure",
        [](const std::string& fig_id, const py::object& overrides) {
            return run_figure(fig_id, overrides_or_empty(overrides));
        },
        py::arg("fig_id"), py::arg("overrides") = py::none());
}
