#include <cmath>
#include <fstream>
#include <sstream>

#include "tmsq/errors.hpp"
#include "tmsq/experiments.hpp"
#include "tmsq/model.hpp"

namespace tmsq {

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ConfigError("'" + where + "' must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double need_num(const json& j, const std::string& where) {
    if (!j.is_number())
        throw ConfigError("'" + where + "' must be a number");
    return j.get<double>();
}

void take(const json& j, const char* key, double& slot,
          const std::string& where) {
    if (j.contains(key)) slot = need_num(j.at(key), where + "." + key);
}

std::vector<double> parse_axis(const json& j, const std::string& where) {
    if (j.is_array()) {
        std::vector<double> v;
        v.reserve(j.size());
        for (const auto& e : j) v.push_back(need_num(e, where + "[]"));
        if (v.empty()) throw ConfigError("'" + where + "' is empty");
        return v;
    }
    check_keys(j, where, {"min", "max", "count"});
    if (!j.contains("min") || !j.contains("max") || !j.contains("count"))
        throw ConfigError("'" + where + "' needs min, max and count");
    double lo = need_num(j.at("min"), where + ".min");
    double hi = need_num(j.at("max"), where + ".max");
    if (!j.at("count").is_number_integer())
        throw ConfigError("'" + where + ".count' must be an integer");
    long long n = j.at("count").get<long long>();
    if (n < 1 || n > 1000000)
        throw ConfigError("'" + where + ".count' out of range");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
    } else {
        for (long long i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] =
                lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(n - 1);
    }
    return v;
}

} // namespace

RunConfig default_config() {
    RunConfig c;
    c.system.g = c.system.G = 0.1;
    c.system.delta_b = 1.0 + 10.0 * c.system.g;
    c.system.kappa_a = c.system.kappa_b = 1e-3;
    c.system.kappa_m = 1e-6;
    c.system.n_m = 10.0;
    // two-mode resonance including the mechanical detuning shift
    c.system.delta_a = -c.system.delta_b + effective_coupling(c.system).delta;
    return c;
}

RunConfig config_from_json(const json& j) {
    check_keys(j, "config", {"system", "physical", "errors", "axes", "times",
                             "output", "model"});
    RunConfig c = default_config();

    if (j.contains("system")) {
        const json& s = j.at("system");
        check_keys(s, "system",
                   {"delta_a", "delta_b", "g", "G", "theta_a", "theta_b",
                    "kappa_a", "kappa_b", "kappa_m", "n_a", "n_b", "n_m"});
        take(s, "delta_a", c.system.delta_a, "system");
        take(s, "delta_b", c.system.delta_b, "system");
        take(s, "g", c.system.g, "system");
        take(s, "G", c.system.G, "system");
        take(s, "theta_a", c.system.theta_a, "system");
        take(s, "theta_b", c.system.theta_b, "system");
        take(s, "kappa_a", c.system.kappa_a, "system");
        take(s, "kappa_b", c.system.kappa_b, "system");
        take(s, "kappa_m", c.system.kappa_m, "system");
        take(s, "n_a", c.system.n_a, "system");
        take(s, "n_b", c.system.n_b, "system");
        take(s, "n_m", c.system.n_m, "system");
        try {
            c.system.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("system: ") + e.what());
        }
    }

    if (j.contains("physical")) {
        const json& s = j.at("physical");
        check_keys(s, "physical",
                   {"omega_a_hz", "omega_b_hz", "omega_m_hz", "temp_k"});
        PhysicalParams ph;
        ph.omega_a_hz = 1e10;
        ph.omega_b_hz = 1e10;
        ph.omega_m_hz = 1e7;
        take(s, "omega_a_hz", ph.omega_a_hz, "physical");
        take(s, "omega_b_hz", ph.omega_b_hz, "physical");
        take(s, "omega_m_hz", ph.omega_m_hz, "physical");
        take(s, "temp_k", ph.temp_k, "physical");
        c.physical = ph;
    }

    if (j.contains("errors")) {
        const json& s = j.at("errors");
        check_keys(s, "errors", {"gamma", "eta"});
        take(s, "gamma", c.errors.gamma, "errors");
        take(s, "eta", c.errors.eta, "errors");
    }

    if (j.contains("axes")) {
        const json& s = j.at("axes");
        if (!s.is_object()) throw ConfigError("'axes' must be an object");
        for (auto it = s.begin(); it != s.end(); ++it)
            c.axes[it.key()] = parse_axis(it.value(), "axes." + it.key());
    }

    if (j.contains("times")) {
        const json& s = j.at("times");
        check_keys(s, "times", {"values", "count", "max_frac_of_tau"});
        if (s.contains("values")) {
            if (s.contains("count") || s.contains("max_frac_of_tau"))
                throw ConfigError(
                    "times: give either values or count/max_frac_of_tau");
            c.times = parse_axis(s.at("values"), "times.values");
            for (std::size_t i = 1; i < c.times.size(); ++i)
                if (!(c.times[i] >= c.times[i - 1]))
                    throw ConfigError("times.values must be nondecreasing");
            if (c.times.front() < 0.0)
                throw ConfigError("times.values must be nonnegative");
        } else {
            if (s.contains("count")) {
                if (!s.at("count").is_number_integer())
                    throw ConfigError("times.count must be an integer");
                long long n = s.at("count").get<long long>();
                if (n < 2 || n > 1000000)
                    throw ConfigError("times.count out of range");
                c.time_count = static_cast<int>(n);
            }
            double frac = c.t_max_frac_of_tau;
            take(s, "max_frac_of_tau", frac, "times");
            if (!(frac > 0.0))
                throw ConfigError("times.max_frac_of_tau must be positive");
            c.t_max_frac_of_tau = frac;
        }
    }

    if (j.contains("output")) {
        const json& s = j.at("output");
        check_keys(s, "output", {"dir", "json"});
        if (s.contains("dir")) {
            if (!s.at("dir").is_string())
                throw ConfigError("output.dir must be a string");
            c.out_dir = s.at("dir").get<std::string>();
            if (c.out_dir.empty())
                throw ConfigError("output.dir must not be empty");
        }
        if (s.contains("json")) {
            if (!s.at("json").is_boolean())
                throw ConfigError("output.json must be a boolean");
            c.write_json = s.at("json").get<bool>();
        }
    }

    if (j.contains("model")) {
        if (!j.at("model").is_string())
            throw ConfigError("model must be a string");
        c.model = j.at("model").get<std::string>();
        if (c.model != "full" && c.model != "effective" &&
            c.model != "reservoir")
            throw ConfigError("model must be full, effective or reservoir");
    }

    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["system"] = {
        {"delta_a", c.system.delta_a}, {"delta_b", c.system.delta_b},
        {"g", c.system.g},             {"G", c.system.G},
        {"theta_a", c.system.theta_a}, {"theta_b", c.system.theta_b},
        {"kappa_a", c.system.kappa_a}, {"kappa_b", c.system.kappa_b},
        {"kappa_m", c.system.kappa_m}, {"n_a", c.system.n_a},
        {"n_b", c.system.n_b},         {"n_m", c.system.n_m}};
    if (c.physical) {
        j["physical"] = {{"omega_a_hz", c.physical->omega_a_hz},
                         {"omega_b_hz", c.physical->omega_b_hz},
                         {"omega_m_hz", c.physical->omega_m_hz},
                         {"temp_k", c.physical->temp_k}};
    }
    j["errors"] = {{"gamma", c.errors.gamma}, {"eta", c.errors.eta}};
    if (!c.axes.empty()) {
        json ax = json::object();
        for (const auto& [name, vals] : c.axes) ax[name] = vals;
        j["axes"] = ax;
    }
    if (!c.times.empty()) {
        j["times"] = {{"values", c.times}};
    } else {
        j["times"] = {{"count", c.time_count},
                      {"max_frac_of_tau", c.t_max_frac_of_tau}};
    }
    j["output"] = {{"dir", c.out_dir}, {"json", c.write_json}};
    j["model"] = c.model;
    return j;
}

void json_deep_merge(json& base, const json& over) {
    if (!base.is_object() || !over.is_object()) {
        base = over;
        return;
    }
    for (auto it = over.begin(); it != over.end(); ++it) {
        if (base.contains(it.key()))
            json_deep_merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

void apply_override(json& doc, const std::string& dotted_path,
                    const std::string& value) {
    if (dotted_path.empty()) throw ConfigError("empty override path");
    json* cur = &doc;
    std::size_t pos = 0;
    while (true) {
        std::size_t dot = dotted_path.find('.', pos);
        std::string key = dotted_path.substr(
            pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (key.empty())
            throw ConfigError("bad override path '" + dotted_path + "'");
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::parse_error&) {
                parsed = value; // plain string value
            }
            (*cur)[key] = parsed;
            return;
        }
        if (!cur->contains(key)) (*cur)[key] = json::object();
        cur = &(*cur)[key];
        if (!cur->is_object())
            throw ConfigError("override path '" + dotted_path +
                              "' crosses a non-object value");
        pos = dot + 1;
    }
}

RunConfig load_config(const std::string& path_or_empty,
                      const std::vector<std::string>& overrides,
                      const json& base) {
    json doc = base.is_object() ? base : json::object();
    if (!path_or_empty.empty()) {
        std::ifstream f(path_or_empty);
        if (!f)
            throw ConfigError("cannot open config file " + path_or_empty);
        json file;
        try {
            f >> file;
        } catch (const json::parse_error& e) {
            throw ConfigError("config parse error in " + path_or_empty +
                              ": " + e.what());
        }
        json_deep_merge(doc, file);
    }
    for (const std::string& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' is not key=value");
        apply_override(doc, ov.substr(0, eq), ov.substr(eq + 1));
    }
    return config_from_json(doc);
}

} // namespace tmsq
