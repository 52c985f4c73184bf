#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmsq/types.hpp"

namespace tmsq {

using json = nlohmann::json;

// Run configuration, loadable from JSON. Schema (all sections optional,
// unknown keys rejected):
//   {
//     "system":  {delta_a, delta_b, g, G, theta_a, theta_b,
//                 kappa_a, kappa_b, kappa_m, n_a, n_b, n_m},
//     "physical": {omega_a_hz, omega_b_hz, omega_m_hz, temp_k},
//     "errors":  {gamma, eta},
//     "axes":    {name: [v0, v1, ...] | {"min": a, "max": b, "count": n}},
//     "times":   {"values": [...]} | {"count": n, "max_frac_of_tau": x},
//     "output":  {"dir": path, "json": bool},
//     "model":   "full" | "effective" | "reservoir"
//   }
struct RunConfig {
    SystemParams system;
    std::optional<PhysicalParams> physical;
    ErrorCoeffs errors;
    std::map<std::string, std::vector<double>> axes;
    std::vector<double> times; // explicit; when empty the grid below applies
    int time_count = 512;
    double t_max_frac_of_tau = 1.5;
    std::string out_dir = "out";
    bool write_json = false;
    std::string model = "full";
};

// Workhorse defaults shared by the study presets: g = G = 0.1,
// delta_b = 1 + 10 g, delta_a = -delta_b + delta shift, kappa_a = kappa_b
// = 1e-3, kappa_m = 1e-6, n_m = 10, photon baths empty.
RunConfig default_config();

RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& cfg);

// Set a dotted path ("system.g", "output.dir", "axes.gamma.count") on a
// JSON document, parsing value as JSON first and falling back to string.
void apply_override(json& doc, const std::string& dotted_path,
                    const std::string& value);

// Recursive object merge, over wins; non-objects replace wholesale.
void json_deep_merge(json& base, const json& over);

// Parse file (optional) + overrides into a config. base supplies defaults.
RunConfig load_config(const std::string& path_or_empty,
                      const std::vector<std::string>& overrides,
                      const json& base = json::object());

// Everything a run leaves on disk. The manifest echoes the full config,
// library version, wall-clock seconds, per-cell status, and a sha256 per
// emitted file.
struct RunOutputs {
    std::vector<std::string> files;
    std::string manifest;
};

// ---- computation cores (pure, no file IO) ----

struct SweepErrorRow {
    double gamma = 0.0, eta = 0.0;
    double s_lin = 0.0;       // fixed pi/4 hybrid quadrature at nominal tau
    double s_tilde_lin = 0.0; // optimized quadrature at nominal tau
};
std::vector<SweepErrorRow> sweep_systematic(const RunConfig& cfg,
                                            const std::vector<double>& gammas,
                                            const std::vector<double>& etas);

struct ThermalRow {
    double temp_k = 0.0;
    double n_a = 0.0, n_b = 0.0, n_m = 0.0;
    double s_half = 0.0;      // S_lin at tau/2
    double s_tau = 0.0;       // at tau
    double s_threehalf = 0.0; // at 3 tau / 2
};
std::vector<ThermalRow> sweep_thermal(const RunConfig& cfg,
                                      const std::vector<double>& temps_k);

struct BaselineRow {
    double g = 0.0, ratio = 0.0;
    double s_db = 0.0;       // squeezing of (X_a + X_b)/sqrt(2)
    double s_prime_db = 0.0; // anti-squeezing of (Y_a + Y_b)/sqrt(2)
};
std::vector<BaselineRow> baseline_reservoir(const RunConfig& cfg,
                                            const std::vector<double>& ratios);

// ---- runners (compute + CSV/JSON emission + manifest) ----

RunOutputs run_geff_scan(const RunConfig& cfg);
RunOutputs run_evolve(const RunConfig& cfg);
RunOutputs run_steady(const RunConfig& cfg);
RunOutputs run_squeeze(const RunConfig& cfg);
RunOutputs run_sweep_error(const RunConfig& cfg);
RunOutputs run_sweep_thermal(const RunConfig& cfg);
RunOutputs run_baseline(const RunConfig& cfg);

// Study presets. fig_id is one of fig2a, fig2b, fig3, fig4, fig5, figB,
// figC1, figC2; overrides are merged onto the preset's defaults before
// parsing. Unknown ids throw UnknownFigure.
std::vector<std::string> figure_ids();
json figure_default_json(const std::string& fig_id);
RunOutputs run_figure(const std::string& fig_id,
                      const json& overrides = json::object());

// library version string ("0.1.0")
const char* version();

} // namespace tmsq
