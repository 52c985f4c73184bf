#include "tmsq/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tmsq/dynamics.hpp"
#include "tmsq/errors.hpp"
#include "tmsq/matrices.hpp"
#include "tmsq/model.hpp"
#include "tmsq/spectral.hpp"
#include "tmsq/squeezing.hpp"
#include "tmsq/util.hpp"

namespace tmsq {

namespace {

namespace fs = std::filesystem;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// collects emitted tables and writes the run manifest at the end
class Emitter {
  public:
    Emitter(const RunConfig& cfg, std::string kind)
        : dir_(cfg.out_dir), write_json_(cfg.write_json),
          echo_(config_to_json(cfg)), kind_(std::move(kind)),
          t0_(std::chrono::steady_clock::now()) {
        fs::create_directories(dir_);
    }

    void table(const std::string& name,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
        std::string path = dir_ + "/" + name + ".csv";
        CsvWriter w(path, header);
        for (const auto& r : rows) w.row(r);
        w.close();
        names_.push_back(name + ".csv");
        files_.push_back(path);
        if (write_json_) {
            json arr = json::array();
            for (const auto& r : rows) {
                json o = json::object();
                for (std::size_t c = 0; c < header.size(); ++c)
                    o[header[c]] = r[c]; // NaN serializes as null
                arr.push_back(o);
            }
            std::string jpath = dir_ + "/" + name + ".json";
            std::ofstream f(jpath, std::ios::trunc);
            if (!f) throw Error("cannot write " + jpath);
            f << arr.dump(1) << '\n';
            names_.push_back(name + ".json");
            files_.push_back(jpath);
        }
    }

    void matrix(const std::string& name,
                const std::vector<std::string>& labels, const Mat& m) {
        std::string path = dir_ + "/" + name + ".csv";
        CsvWriter w(path, labels);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(m.cols()));
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                row[static_cast<std::size_t>(c)] = m(r, c);
            w.row(row);
        }
        w.close();
        names_.push_back(name + ".csv");
        files_.push_back(path);
    }

    void cell(const std::string& id, const std::string& status) {
        cells_.emplace_back(id, status);
    }

    RunOutputs finish() {
        using sec = std::chrono::duration<double>;
        json man;
        man["version"] = version();
        man["kind"] = kind_;
        man["config"] = echo_;
        man["wall_clock_s"] =
            sec(std::chrono::steady_clock::now() - t0_).count();
        json cells = json::array();
        for (const auto& [id, st] : cells_)
            cells.push_back({{"id", id}, {"status", st}});
        man["cells"] = cells;
        json files = json::array();
        for (std::size_t i = 0; i < files_.size(); ++i)
            files.push_back(
                {{"path", names_[i]}, {"sha256", sha256_file(files_[i])}});
        man["files"] = files;
        std::string mpath = dir_ + "/manifest.json";
        std::ofstream f(mpath, std::ios::trunc);
        if (!f) throw Error("cannot write " + mpath);
        f << man.dump(1) << '\n';
        return RunOutputs{files_, mpath};
    }

  private:
    std::string dir_;
    bool write_json_;
    json echo_;
    std::string kind_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<std::string> names_; // manifest-relative
    std::vector<std::string> files_; // as written
    std::vector<std::pair<std::string, std::string>> cells_;
};

struct Assembled {
    DriftMatrix a;
    DiffusionMatrix d;
};

Assembled assemble(const RunConfig& cfg) {
    if (cfg.model == "effective") {
        EffectiveParams ep = effective_params(cfg.system);
        return Assembled{build_eff_drift(ep),
                         build_diffusion(cfg.system, Basis::Effective4)};
    }
    if (cfg.model == "reservoir")
        return Assembled{build_reservoir_drift(cfg.system),
                         build_diffusion(cfg.system, Basis::Full6)};
    return Assembled{build_full_drift(cfg.system),
                     build_diffusion(cfg.system, Basis::Full6)};
}

// characteristic time used when no explicit grid is given
double char_time(const RunConfig& cfg) {
    if (cfg.model == "reservoir") {
        StabilityReport st =
            classify_stability(build_reservoir_drift(cfg.system));
        if (st.max_re_eig == 0.0)
            throw Error("no time scale: reservoir drift has a zero rate");
        return 2.0 * 3.14159265358979323846 / std::abs(st.max_re_eig);
    }
    return tau(effective_params(cfg.system));
}

std::vector<double> resolve_times(const RunConfig& cfg) {
    if (!cfg.times.empty()) return cfg.times;
    return linspace(0.0, cfg.t_max_frac_of_tau * char_time(cfg),
                    cfg.time_count);
}

Mat vacuum_v0(int n) { return 0.5 * Mat::Identity(n, n); }

// photons thermal, mechanics vacuum
Mat thermal_v0(double n_a, double n_b) {
    Mat v = vacuum_v0(6);
    v(0, 0) = v(1, 1) = n_a + 0.5;
    v(2, 2) = v(3, 3) = n_b + 0.5;
    return v;
}

std::vector<Mat> evolve_grid(const Mat& a, const Mat& d, const Mat& v0,
                             const std::vector<double>& times) {
    std::vector<Mat> out;
    out.reserve(times.size());
    Propagator prop(a, d);
    Mat v = v0;
    double tprev = 0.0;
    for (double t : times) {
        if (t < tprev)
            throw std::invalid_argument("time grid must be nondecreasing");
        v = prop.step(v, t - tprev);
        tprev = t;
        out.push_back(v);
    }
    return out;
}

// variance of cos(phi) X_a + sin(phi) Y_b under a 4x4 or 6x6 covariance
double fixed_angle_variance(const Mat& v, double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    return c * c * v(0, 0) + s * s * v(3, 3) + 2.0 * c * s * v(0, 3);
}

// conjugate partner cos(phi) Y_a - sin(phi) X_b
double fixed_angle_variance_conj(const Mat& v, double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    return c * c * v(1, 1) + s * s * v(2, 2) - 2.0 * c * s * v(1, 2);
}

std::vector<double> axis_or(const RunConfig& cfg, const std::string& name,
                            std::vector<double> fallback) {
    auto it = cfg.axes.find(name);
    return it == cfg.axes.end() ? fallback : it->second;
}

// per-curve variant of the workhorse configuration: g = G, detuning
// scaled with the coupling, two-mode resonance restored
SystemParams rescaled_system(const SystemParams& base, double g) {
    SystemParams s = base;
    s.g = s.G = g;
    s.delta_b = 1.0 + 10.0 * g;
    s.delta_a = -s.delta_b;
    s.delta_a += effective_coupling(s).delta;
    return s;
}

std::string cell_id(const std::string& prefix, std::size_t i) {
    return prefix + "[" + std::to_string(i) + "]";
}

} // namespace

const char* version() { return "0.1.0"; }

std::vector<SweepErrorRow> sweep_systematic(const RunConfig& cfg,
                                            const std::vector<double>& gammas,
                                            const std::vector<double>& etas) {
    if (gammas.empty() || etas.empty())
        throw std::invalid_argument("sweep_systematic: empty axis");
    const SystemParams& sys = cfg.system;
    EffectiveParams ep = effective_params(sys);
    const double t_nom = tau(ep);
    const double ang =
        optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;

    std::vector<SweepErrorRow> rows(gammas.size() * etas.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        SweepErrorRow& r = rows[k];
        r.gamma = gammas[k / etas.size()];
        r.eta = etas[k % etas.size()];
        try {
            SystemParams q =
                apply_systematic_error(sys, ErrorCoeffs{r.gamma, r.eta});
            Mat v = evolve(build_full_drift(q).a,
                           build_diffusion(q, Basis::Full6).d, vacuum_v0(6),
                           t_nom);
            r.s_lin = squeezing_level(fixed_angle_variance(v, ang));
            r.s_tilde_lin = optimize_quadrature(v, t_nom).level_db;
        } catch (const Error&) {
            r.s_lin = r.s_tilde_lin = kNan;
        }
    });
    return rows;
}

std::vector<ThermalRow> sweep_thermal(const RunConfig& cfg,
                                      const std::vector<double>& temps_k) {
    if (temps_k.empty())
        throw std::invalid_argument("sweep_thermal: empty axis");
    PhysicalParams ph;
    ph.omega_a_hz = 1e10;
    ph.omega_b_hz = 1e10;
    ph.omega_m_hz = 1e7;
    if (cfg.physical) ph = *cfg.physical;

    const SystemParams& sys = cfg.system;
    EffectiveParams ep = effective_params(sys);
    const double t_nom = tau(ep);
    const double ang =
        optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;
    const Mat a = build_full_drift(sys).a;

    std::vector<ThermalRow> rows(temps_k.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        ThermalRow& r = rows[k];
        r.temp_k = temps_k[k];
        try {
            r.n_a = thermal_occupation(ph.omega_a_hz, r.temp_k);
            r.n_b = thermal_occupation(ph.omega_b_hz, r.temp_k);
            r.n_m = thermal_occupation(ph.omega_m_hz, r.temp_k);
            SystemParams q = sys;
            q.n_a = r.n_a;
            q.n_b = r.n_b;
            q.n_m = r.n_m;
            Mat d = build_diffusion(q, Basis::Full6).d;
            Mat v0 = thermal_v0(r.n_a, r.n_b);
            double* out[3] = {&r.s_half, &r.s_tau, &r.s_threehalf};
            double fracs[3] = {0.5, 1.0, 1.5};
            for (int i = 0; i < 3; ++i) {
                Mat v = evolve(a, d, v0, fracs[i] * t_nom);
                *out[i] = squeezing_level(fixed_angle_variance(v, ang));
            }
        } catch (const Error&) {
            r.s_half = r.s_tau = r.s_threehalf = kNan;
        }
    });
    return rows;
}

std::vector<BaselineRow> baseline_reservoir(const RunConfig& cfg,
                                            const std::vector<double>& ratios) {
    if (ratios.empty())
        throw std::invalid_argument("baseline_reservoir: empty axis");
    const SystemParams& sys = cfg.system;
    if (!(sys.g > 0.0))
        throw std::invalid_argument("baseline_reservoir: need g > 0");

    std::vector<BaselineRow> rows(ratios.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        BaselineRow& r = rows[k];
        r.g = sys.g;
        r.ratio = ratios[k];
        r.s_db = r.s_prime_db = kNan;
        if (!(r.ratio >= 0.0)) return;
        try {
            SystemParams q = sys;
            q.G = r.ratio * sys.g;
            q.delta_a = 1.0;
            q.delta_b = -1.0;
            Mat v = steady_state(build_reservoir_drift(q).a,
                                 build_diffusion(q, Basis::Full6).d);
            double dx = 0.5 * (v(0, 0) + v(2, 2) + 2.0 * v(0, 2));
            double dy = 0.5 * (v(1, 1) + v(3, 3) + 2.0 * v(1, 3));
            r.s_db = squeezing_level(dx);
            r.s_prime_db = anti_squeezing_level(dy);
        } catch (const Error&) {
            // row stays NaN (unstable ratio, non-positive variance, ...)
        }
    });
    return rows;
}

RunOutputs run_geff_scan(const RunConfig& cfg) {
    Emitter em(cfg, "geff-scan");
    const SystemParams& p = cfg.system;
    std::vector<double> grid = axis_or(cfg, "delta_a", {});
    if (grid.empty()) grid = default_scan_grid(p);

    ScanResult scan = eigen_scan(p, grid);
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size() * 6);
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (int b = 0; b < 6; ++b)
            rows.push_back({grid[k], static_cast<double>(b),
                            scan.branches[b].values[k].real(),
                            scan.branches[b].values[k].imag()});
    em.table("scan", {"delta_a", "branch_id", "re_lambda", "im_lambda"},
             rows);

    GeffExtraction ex = extract_geff_numeric(p, grid);
    em.table("extraction",
             {"g_eff_num", "delta_num", "g_eff_ana", "delta_ana", "sigma"},
             {{ex.g_eff_num, ex.delta_num, ex.g_eff_ana, ex.delta_ana,
               ex.sigma}});
    em.cell("scan", "ok");
    em.cell("extraction", "ok");
    return em.finish();
}

RunOutputs run_evolve(const RunConfig& cfg) {
    Emitter em(cfg, "evolve");
    Assembled m = assemble(cfg);
    std::vector<double> times = resolve_times(cfg);
    std::vector<Mat> vs = evolve_grid(m.a.a, m.d.d,
                                      vacuum_v0(basis_dim(m.a.basis)), times);
    bool full = m.a.basis == Basis::Full6;
    std::vector<std::string> header = {"t", "V11", "V14", "V44"};
    if (full) {
        header.push_back("V15");
        header.push_back("V55");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Mat& v = vs[k];
        std::vector<double> r = {times[k], v(0, 0), v(0, 3), v(3, 3)};
        if (full) {
            r.push_back(v(0, 4));
            r.push_back(v(4, 4));
        }
        rows.push_back(std::move(r));
    }
    em.table("trajectory", header, rows);
    em.cell("trajectory", "ok");
    return em.finish();
}

RunOutputs run_steady(const RunConfig& cfg) {
    Emitter em(cfg, "steady");
    Assembled m = assemble(cfg);
    Mat v = steady_state(m.a.a, m.d.d);
    em.matrix("steady", basis_labels(m.a.basis), v);
    em.cell("steady", "ok");
    return em.finish();
}

RunOutputs run_squeeze(const RunConfig& cfg) {
    Emitter em(cfg, "squeeze");
    Assembled m = assemble(cfg);
    std::vector<double> times = resolve_times(cfg);
    std::vector<Mat> vs = evolve_grid(m.a.a, m.d.d,
                                      vacuum_v0(basis_dim(m.a.basis)), times);
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        SqueezeReport rep = optimize_quadrature(vs[k], times[k]);
        auto ang = rep.spec.angles();
        rows.push_back(
            {rep.t, rep.delta_x, rep.level_db, ang[0], ang[1], ang[2]});
    }
    em.table("squeeze", {"t", "delta_x", "level_db", "phi1", "phi2", "phi3"},
             rows);
    em.cell("squeeze", "ok");
    return em.finish();
}

RunOutputs run_sweep_error(const RunConfig& cfg) {
    Emitter em(cfg, "sweep-error");
    std::vector<double> gammas =
        axis_or(cfg, "gamma", linspace(-0.2, 0.2, 21));
    std::vector<double> etas = axis_or(cfg, "eta", {0.0});
    auto rows = sweep_systematic(cfg, gammas, etas);
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out.push_back({r.gamma, r.eta, r.s_lin, r.s_tilde_lin});
        em.cell(cell_id("cell", k),
                std::isnan(r.s_lin) ? "failed" : "ok");
    }
    em.table("sweep_error", {"gamma", "eta", "s_lin", "s_tilde_lin"}, out);
    return em.finish();
}

RunOutputs run_sweep_thermal(const RunConfig& cfg) {
    Emitter em(cfg, "sweep-thermal");
    std::vector<double> temps =
        axis_or(cfg, "temp_k", linspace(0.0, 0.1, 11));
    auto rows = sweep_thermal(cfg, temps);
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out.push_back(
            {r.temp_k, r.n_a, r.n_b, r.n_m, r.s_half, r.s_tau, r.s_threehalf});
        em.cell(cell_id("temp", k), std::isnan(r.s_tau) ? "failed" : "ok");
    }
    em.table("thermal",
             {"temp_k", "n_a", "n_b", "n_m", "s_half", "s_tau",
              "s_threehalf"},
             out);
    return em.finish();
}

RunOutputs run_baseline(const RunConfig& cfg) {
    Emitter em(cfg, "baseline");
    std::vector<double> ratios =
        axis_or(cfg, "ratio", linspace(0.1, 0.99, 90));
    auto rows = baseline_reservoir(cfg, ratios);
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out.push_back({r.g, r.ratio, r.s_db, r.s_prime_db});
        em.cell(cell_id("ratio", k), std::isnan(r.s_db) ? "failed" : "ok");
    }
    em.table("baseline", {"g", "ratio", "s_db", "s_prime_db"}, out);
    return em.finish();
}

std::vector<std::string> figure_ids() {
    return {"fig2a", "fig2b", "fig3", "fig4",
            "fig5",  "figB",  "figC1", "figC2"};
}

json figure_default_json(const std::string& fig_id) {
    bool known = false;
    for (const auto& id : figure_ids())
        if (id == fig_id) known = true;
    if (!known) throw UnknownFigure("unknown figure id '" + fig_id + "'");

    json j = config_to_json(default_config());
    j["output"]["dir"] = "out/" + fig_id;
    if (fig_id == "fig3") {
        j["axes"]["g"] = std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.25};
    } else if (fig_id == "fig4") {
        j["axes"]["g"] = std::vector<double>{0.05, 0.1, 0.15, 0.2};
        j["axes"]["gamma"] = {{"min", -0.2}, {"max", 0.2}, {"count", 41}};
        j["axes"]["eta"] = {{"min", -1e-3}, {"max", 1e-3}, {"count", 41}};
    } else if (fig_id == "fig5") {
        j["physical"] = {{"omega_a_hz", 1e10},
                         {"omega_b_hz", 1e10},
                         {"omega_m_hz", 1e7},
                         {"temp_k", 0.0}};
        j["axes"]["temp_k"] = {{"min", 0.0}, {"max", 0.1}, {"count", 11}};
    } else if (fig_id == "figB") {
        j["axes"]["g"] = std::vector<double>{0.05, 0.1, 0.2};
        j["axes"]["ratio"] = {{"min", 0.1}, {"max", 0.99}, {"count", 90}};
    } else if (fig_id == "figC1") {
        j["system"]["delta_b"] = 3.0;
        j["system"]["delta_a"] = -3.0;
        j["axes"]["delta_a"] = {{"min", -3.4}, {"max", -2.6}, {"count", 161}};
    } else if (fig_id == "figC2") {
        j["axes"]["g"] = {{"min", 0.05}, {"max", 0.25}, {"count", 9}};
        j["axes"]["detuning_ratio"] = {{"min", 6.0}, {"max", 12.0},
                                       {"count", 7}};
        j["axes"]["delta_b"] = {{"min", 1.5}, {"max", 4.0}, {"count", 26}};
    }
    return j;
}

namespace {

RunOutputs fig_fig2a(const RunConfig& cfg) {
    Emitter em(cfg, "figure fig2a");
    EffectiveParams ep = effective_params(cfg.system);
    std::vector<double> times = resolve_times(cfg);
    std::vector<Mat> full =
        evolve_grid(build_full_drift(cfg.system).a,
                    build_diffusion(cfg.system, Basis::Full6).d, vacuum_v0(6),
                    times);
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        Mat veff = analytic_eff_cm(ep, times[k]).v;
        rows.push_back({times[k], veff(0, 0), veff(0, 3), full[k](0, 0),
                        full[k](0, 3)});
    }
    em.table("fig2a",
             {"t", "v11_eff", "v14_eff", "v11_full", "v14_full"}, rows);
    em.cell("fig2a", "ok");
    return em.finish();
}

RunOutputs fig_fig2b(const RunConfig& cfg) {
    Emitter em(cfg, "figure fig2b");
    EffectiveParams ep = effective_params(cfg.system);
    const double ang =
        optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;
    std::vector<double> times = resolve_times(cfg);
    std::vector<Mat> full =
        evolve_grid(build_full_drift(cfg.system).a,
                    build_diffusion(cfg.system, Basis::Full6).d, vacuum_v0(6),
                    times);
    std::vector<std::vector<double>> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        double dx_eff = variance_X(ep, times[k]);
        double dx_lin = fixed_angle_variance(full[k], ang);
        double dx_tilde = optimize_quadrature(full[k], times[k]).delta_x;
        rows.push_back({times[k], dx_eff, dx_lin, dx_tilde});
    }
    em.table("fig2b",
             {"t", "delta_x_eff", "delta_x_lin", "delta_x_tilde_lin"}, rows);
    em.cell("fig2b", "ok");
    return em.finish();
}

RunOutputs fig_fig3(const RunConfig& cfg) {
    Emitter em(cfg, "figure fig3");
    std::vector<double> gs =
        axis_or(cfg, "g", {0.05, 0.1, 0.15, 0.2, 0.25});

    std::vector<std::vector<double>> series;
    std::vector<std::vector<double>> checks;
    for (double gv : gs) {
        SystemParams sys = rescaled_system(cfg.system, gv);
        EffectiveParams ep = effective_params(sys);
        double t_g = tau(ep);
        double ang = optimal_angle(ep.g_eff, ep.kappa_a, ep.kappa_b).phi_tilde;
        std::vector<double> times =
            cfg.times.empty()
                ? linspace(0.0, cfg.t_max_frac_of_tau * t_g, cfg.time_count)
                : cfg.times;
        std::vector<Mat> full = evolve_grid(
            build_full_drift(sys).a, build_diffusion(sys, Basis::Full6).d,
            vacuum_v0(6), times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            double t = times[k];
            double s_eff =
                t == 0.0 ? 0.0 : squeezing_level(variance_X(ep, t));
            double sp_eff =
                t == 0.0 ? 0.0
                         : anti_squeezing_level(variance_Y(ep, t));
            double s_lin =
                squeezing_level(fixed_angle_variance(full[k], ang));
            double s_tilde = optimize_quadrature(full[k], t).level_db;
            double sp_lin = anti_squeezing_level(
                fixed_angle_variance_conj(full[k], ang));
            series.push_back(
                {gv, t, s_eff, s_lin, s_tilde, sp_eff, sp_lin});
        }
        // checkpoint comparison against the effective prediction
        for (double frac : {0.75, 1.0, 1.25}) {
            double t = frac * t_g;
            Mat v = evolve(build_full_drift(sys).a,
                           build_diffusion(sys, Basis::Full6).d, vacuum_v0(6),
                           t);
            double s_eff = squeezing_level(variance_X(ep, t));
            double s_lin = squeezing_level(fixed_angle_variance(v, ang));
            double s_tilde = optimize_quadrature(v, t).level_db;
            auto errs = relative_sl_errors(s_lin, s_tilde, s_eff);
            checks.push_back(
                {gv, frac, t, s_eff, s_lin, s_tilde, errs.eps,
                 errs.eps_tilde});
        }
        em.cell("fig3 g=" + format_double(gv), "ok");
    }
    em.table("fig3_timeseries",
             {"g", "t", "s_eff", "s_lin", "s_tilde_lin", "s_prime_eff",
              "s_prime_lin"},
             series);
    em.table("fig3_checkpoints",
             {"g", "frac_of_tau", "t", "s_eff", "s_lin", "s_tilde_lin",
              "eps", "eps_tilde"},
             checks);
    return em.finish();
}

RunOutputs fig_fig4(const RunConfig& cfg) {
    Emitter em(cfg, "figure fig4");
    std::vector<double> gs = axis_or(cfg, "g", {0.05, 0.1, 0.15, 0.2});
    std::vector<double> gammas =
        axis_or(cfg, "gamma", linspace(-0.2, 0.2, 41));
    std::vector<double> etas =
        axis_or(cfg, "eta", linspace(-1e-3, 1e-3, 41));

    std::vector<std::vector<double>> grows, erows;
    for (double gv : gs) {
        RunConfig sub = cfg;
        sub.system = rescaled_system(cfg.system, gv);
        auto gsw = sweep_systematic(sub, gammas, {0.0});
        for (const auto& r : gsw)
            grows.push_back({gv, r.gamma, r.s_lin, r.s_tilde_lin});
        auto esw = sweep_systematic(sub, {0.0}, etas);
        for (const auto& r : esw)
            erows.push_back({gv, r.eta, r.s_lin, r.s_tilde_lin});
        em.cell("fig4 g=" + format_double(gv), "ok");
    }
    em.table("fig4_gamma", {"g", "gamma", "s_lin", "s_tilde_lin"}, grows);
    em.table("fig4_eta", {"g", "eta", "s_lin", "s_tilde_lin"}, erows);

    auto map = sweep_systematic(cfg, gammas, etas);
    std::vector<std::vector<double>> mrows;
    mrows.reserve(map.size());
    for (const auto& r : map)
        mrows.push_back({r.gamma, r.eta, r.s_lin, r.s_tilde_lin});
    em.table("fig4_map", {"gamma", "eta", "s_lin", "s_tilde_lin"}, mrows);
    em.cell("fig4 map", "ok");
    return em.finish();
}

RunOutputs fig_fig5(const RunConfig& cfg) {
    Emitter em(cfg, "figure fig5");
    std::vector<double> temps =
        axis_or(cfg, "temp_k", linspace(0.0, 0.1, 11));
    auto rows = sweep_thermal(cfg, temps);
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        out.push_back(
            {r.temp_k, r.n_a, r.n_b, r.n_m, r.s_half, r.s_tau, r.s_threehalf});
        em.cell(cell_id("temp", k), std::isnan(r.s_tau) ? "failed" : "ok");
    }
    em.table("fig5",
             {"temp_k", "n_a", "n_b", "n_m", "s_half", "s_tau",
              "s_threehalf"},
             out);
    return em.finish();
}

RunOutputs fig_figB(const RunConfig& cfg) {
    Emitter em(cfg, "figure figB");
    std::vector<double> gs = axis_or(cfg, "g", {0.05, 0.1, 0.2});
    std::vector<double> ratios =
        axis_or(cfg, "ratio", linspace(0.1, 0.99, 90));
    std::vector<std::vector<double>> out;
    for (double gv : gs) {
        RunConfig sub = cfg;
        sub.system.g = gv;
        auto rows = baseline_reservoir(sub, ratios);
        std::size_t bad = 0;
        for (const auto& r : rows) {
            out.push_back({r.g, r.ratio, r.s_db, r.s_prime_db});
            if (std::isnan(r.s_db)) ++bad;
        }
        em.cell("figB g=" + format_double(gv),
                bad == 0 ? "ok" : std::to_string(bad) + " cells failed");
    }
    em.table("figB", {"g", "ratio", "s_db", "s_prime_db"}, out);
    return em.finish();
}

RunOutputs fig_figC1(const RunConfig& cfg) {
    Emitter em(cfg, "figure figC1");
    std::vector<double> grid = axis_or(cfg, "delta_a", {});
    if (grid.empty()) grid = linspace(-3.4, -2.6, 161);
    ScanResult scan = eigen_scan(cfg.system, grid);
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.size() * 6);
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (int b = 0; b < 6; ++b)
            rows.push_back({grid[k], static_cast<double>(b),
                            scan.branches[b].values[k].real(),
                            scan.branches[b].values[k].imag()});
    em.table("figC1", {"delta_a", "branch_id", "re_lambda", "im_lambda"},
             rows);
    em.cell("figC1", "ok");
    return em.finish();
}

RunOutputs fig_figC2(const RunConfig& cfg) {
    Emitter em(cfg, "figure figC2");
    std::vector<double> gs = axis_or(cfg, "g", linspace(0.05, 0.25, 9));
    std::vector<double> rats =
        axis_or(cfg, "detuning_ratio", linspace(6.0, 12.0, 7));

    std::vector<std::vector<double>> mrows(gs.size() * rats.size());
    parallel_for(mrows.size(), [&](std::size_t k) {
        double gv = gs[k / rats.size()];
        double rv = rats[k % rats.size()];
        SystemParams p;
        p.g = p.G = gv;
        p.delta_b = 1.0 + rv * gv;
        p.delta_a = -p.delta_b;
        double sigma = kNan;
        try {
            sigma = extract_geff_numeric(p, default_scan_grid(p)).sigma;
        } catch (const Error&) {
        }
        mrows[k] = {gv, rv, p.delta_b, sigma};
    });
    for (std::size_t k = 0; k < mrows.size(); ++k)
        em.cell(cell_id("map", k),
                std::isnan(mrows[k][3]) ? "failed" : "ok");
    em.table("figC2_map", {"g", "detuning_ratio", "delta_b", "sigma"}, mrows);

    std::vector<double> dbs = axis_or(cfg, "delta_b", linspace(1.5, 4.0, 26));
    std::vector<std::vector<double>> erows(dbs.size());
    parallel_for(erows.size(), [&](std::size_t k) {
        SystemParams p = cfg.system;
        p.delta_b = dbs[k];
        p.delta_a = -p.delta_b;
        erows[k] = {dbs[k], kNan, kNan, kNan, kNan, kNan};
        try {
            GeffExtraction ex = extract_geff_numeric(p, default_scan_grid(p));
            erows[k] = {dbs[k],       ex.g_eff_num, ex.delta_num,
                        ex.g_eff_ana, ex.delta_ana, ex.sigma};
        } catch (const Error&) {
        }
    });
    em.table("figC2_extract",
             {"delta_b", "g_eff_num", "delta_num", "g_eff_ana", "delta_ana",
              "sigma"},
             erows);
    return em.finish();
}

} // namespace

RunOutputs run_figure(const std::string& fig_id, const json& overrides) {
    json j = figure_default_json(fig_id);
    if (!overrides.is_null() && !overrides.empty()) {
        if (!overrides.is_object())
            throw ConfigError("figure overrides must be a JSON object");
        json_deep_merge(j, overrides);
    }
    RunConfig cfg = config_from_json(j);
    if (fig_id == "fig2a") return fig_fig2a(cfg);
    if (fig_id == "fig2b") return fig_fig2b(cfg);
    if (fig_id == "fig3") return fig_fig3(cfg);
    if (fig_id == "fig4") return fig_fig4(cfg);
    if (fig_id == "fig5") return fig_fig5(cfg);
    if (fig_id == "figB") return fig_figB(cfg);
    if (fig_id == "figC1") return fig_figC1(cfg);
    if (fig_id == "figC2") return fig_figC2(cfg);
    throw UnknownFigure("unknown figure id '" + fig_id + "'");
}

} // namespace tmsq
