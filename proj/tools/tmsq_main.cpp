#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmsq/errors.hpp"
#include "tmsq/experiments.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::vector<std::string> set;
    std::string out;
    bool json = false;
    std::string model;
};

void add_common(CLI::App* sc, CommonOpts& c, bool with_model) {
    sc->add_option("--config", c.config, "JSON config file");
    sc->add_option("--set", c.set,
                   "dotted-path override, e.g. --set system.g=0.15");
    sc->add_option("--out", c.out, "output directory");
    sc->add_flag("--json", c.json, "mirror tables to JSON as well");
    if (with_model)
        sc->add_option("--model", c.model, "full | effective | reservoir")
            ->check(CLI::IsMember({"full", "effective", "reservoir"}));
}

std::vector<std::string> collect_overrides(const CommonOpts& c) {
    std::vector<std::string> ov = c.set;
    if (!c.out.empty()) ov.push_back("output.dir=" + c.out);
    if (c.json) ov.push_back("output.json=true");
    if (!c.model.empty()) ov.push_back("model=" + c.model);
    return ov;
}

tmsq::RunConfig build_cfg(const CommonOpts& c,
                          const tmsq::json& base = tmsq::json::object()) {
    return tmsq::load_config(c.config, collect_overrides(c), base);
}

// raw override document for figure runs (figure defaults sit underneath)
tmsq::json figure_overrides(const CommonOpts& c) {
    tmsq::json doc = tmsq::json::object();
    if (!c.config.empty()) {
        std::ifstream f(c.config);
        if (!f) throw tmsq::ConfigError("cannot open config file " + c.config);
        try {
            f >> doc;
        } catch (const tmsq::json::parse_error& e) {
            throw tmsq::ConfigError("config parse error in " + c.config +
                                    ": " + e.what());
        }
    }
    for (const std::string& ov : collect_overrides(c)) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw tmsq::ConfigError("override '" + ov + "' is not key=value");
        tmsq::apply_override(doc, ov.substr(0, eq), ov.substr(eq + 1));
    }
    return doc;
}

void report(const tmsq::RunOutputs& outs) {
    for (const auto& f : outs.files) std::cout << "wrote " << f << "\n";
    std::cout << "wrote " << outs.manifest << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation and analysis of mechanically mediated "
                 "two-mode squeezing"};
    app.set_version_flag("--version", tmsq::version());
    app.require_subcommand(1);

    CommonOpts oscan, oevolve, osteady, osqueeze, ofig, oerr, otherm, obase;
    std::string fig_id;

    CLI::App* scan = app.add_subcommand(
        "geff-scan", "eigenvalue scan and effective-coupling extraction");
    add_common(scan, oscan, false);
    scan->callback([&] { report(tmsq::run_geff_scan(build_cfg(oscan))); });

    CLI::App* evolve =
        app.add_subcommand("evolve", "propagate covariance dynamics");
    add_common(evolve, oevolve, true);
    evolve->callback([&] { report(tmsq::run_evolve(build_cfg(oevolve))); });

    CLI::App* steady =
        app.add_subcommand("steady", "steady-state covariance matrix");
    add_common(steady, osteady, true);
    steady->callback([&] {
        report(tmsq::run_steady(
            build_cfg(osteady, tmsq::json{{"model", "reservoir"}})));
    });

    CLI::App* squeeze = app.add_subcommand(
        "squeeze", "optimized squeezing level along a trajectory");
    add_common(squeeze, osqueeze, true);
    squeeze->callback(
        [&] { report(tmsq::run_squeeze(build_cfg(osqueeze))); });

    CLI::App* figure =
        app.add_subcommand("figure", "run a built-in study preset");
    figure->add_option("id", fig_id, "one of: fig2a fig2b fig3 fig4 fig5 figB figC1 figC2")
        ->required();
    add_common(figure, ofig, false);
    figure->callback(
        [&] { report(tmsq::run_figure(fig_id, figure_overrides(ofig))); });

    CLI::App* swerr = app.add_subcommand(
        "sweep-error", "squeezing under systematic miscalibration");
    add_common(swerr, oerr, false);
    swerr->callback([&] { report(tmsq::run_sweep_error(build_cfg(oerr))); });

    CLI::App* swtherm =
        app.add_subcommand("sweep-thermal", "squeezing vs temperature");
    add_common(swtherm, otherm, false);
    swtherm->callback(
        [&] { report(tmsq::run_sweep_thermal(build_cfg(otherm))); });

    CLI::App* base = app.add_subcommand(
        "baseline", "steady-state squeezing of the reservoir configuration");
    add_common(base, obase, false);
    base->callback([&] { report(tmsq::run_baseline(build_cfg(obase))); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tmsq::UnknownFigure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tmsq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const tmsq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
