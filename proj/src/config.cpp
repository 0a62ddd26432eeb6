#include "dcmg/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dcmg/errors.hpp"

namespace dcmg {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key))
            throw ConfigError("unknown key \"" + path + key + "\"");
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("\"" + path + key + "\" must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError("\"" + path + key + "\" must be an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError("\"" + path + key + "\" must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("\"" + path + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<std::pair<double, double>> get_schedule(const json& obj, const char* key,
                                                    std::vector<std::pair<double, double>> fallback,
                                                    const std::string& path) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError("\"" + path + key + "\" must be an array of [t, value]");
    std::vector<std::pair<double, double>> out;
    for (const auto& knot : v) {
        if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() || !knot[1].is_number())
            throw ConfigError("\"" + path + key + "\" entries must be [t, value] number pairs");
        out.emplace_back(knot[0].get<double>(), knot[1].get<double>());
    }
    if (out.empty()) throw ConfigError("\"" + path + key + "\" must not be empty");
    return out;
}

void parse_plant(const json& obj, PlantParams& p) {
    const std::string path = "plant.";
    reject_unknown(obj,
                   {"v_in_nominal", "p_cpl", "r_series", "l_ind", "c_dc", "c_vir", "r_load",
                    "v_cpl_min", "use_r_series"},
                   path);
    p.v_in_nominal = get_number(obj, "v_in_nominal", p.v_in_nominal, path);
    p.p_cpl = get_number(obj, "p_cpl", p.p_cpl, path);
    p.r_series = get_number(obj, "r_series", p.r_series, path);
    p.l_ind = get_number(obj, "l_ind", p.l_ind, path);
    p.c_dc = get_number(obj, "c_dc", p.c_dc, path);
    p.c_vir = get_number(obj, "c_vir", p.c_vir, path);
    p.v_cpl_min = get_number(obj, "v_cpl_min", p.v_cpl_min, path);
    p.use_r_series = get_bool(obj, "use_r_series", p.use_r_series, path);
    if (obj.contains("r_load")) {
        const auto& v = obj.at("r_load");
        if (v.is_null())
            p.r_load.reset();
        else if (v.is_number())
            p.r_load = v.get<double>();
        else
            throw ConfigError("\"plant.r_load\" must be a number or null");
    }
}

void parse_gitsmbc(const json& obj, GitsmbcGains& g) {
    const std::string path = "gitsmbc.";
    reject_unknown(obj,
                   {"beta1", "beta2", "beta3", "beta_ub1", "beta_ub2", "kappa_a", "kappa_b",
                    "exp_x", "exp_y", "chi", "boundary_layer", "mu_min", "mu_max", "int_floor",
                    "lambda_max", "tau_max"},
                   path);
    g.beta1 = get_number(obj, "beta1", g.beta1, path);
    g.beta2 = get_number(obj, "beta2", g.beta2, path);
    g.beta3 = get_number(obj, "beta3", g.beta3, path);
    g.beta_ub1 = get_number(obj, "beta_ub1", g.beta_ub1, path);
    g.beta_ub2 = get_number(obj, "beta_ub2", g.beta_ub2, path);
    g.kappa_a = get_number(obj, "kappa_a", g.kappa_a, path);
    g.kappa_b = get_number(obj, "kappa_b", g.kappa_b, path);
    g.exp_x = get_int(obj, "exp_x", g.exp_x, path);
    g.exp_y = get_int(obj, "exp_y", g.exp_y, path);
    g.chi = get_number(obj, "chi", g.chi, path);
    g.boundary_layer = get_number(obj, "boundary_layer", g.boundary_layer, path);
    g.mu_min = get_number(obj, "mu_min", g.mu_min, path);
    g.mu_max = get_number(obj, "mu_max", g.mu_max, path);
    g.int_floor = get_number(obj, "int_floor", g.int_floor, path);
    g.lambda_max = get_number(obj, "lambda_max", g.lambda_max, path);
    g.tau_max = get_number(obj, "tau_max", g.tau_max, path);
}

void parse_esmc(const json& obj, EsmcGains& g) {
    const std::string path = "esmc.";
    reject_unknown(obj, {"lambda", "eta", "boundary_layer", "deriv_tau", "mu_min", "mu_max"},
                   path);
    g.lambda = get_number(obj, "lambda", g.lambda, path);
    g.eta = get_number(obj, "eta", g.eta, path);
    g.boundary_layer = get_number(obj, "boundary_layer", g.boundary_layer, path);
    g.deriv_tau = get_number(obj, "deriv_tau", g.deriv_tau, path);
    g.mu_min = get_number(obj, "mu_min", g.mu_min, path);
    g.mu_max = get_number(obj, "mu_max", g.mu_max, path);
}

void parse_sim(const json& obj, SimConfig& s) {
    const std::string path = "sim.";
    reject_unknown(
        obj, {"dt", "duration", "model_mode", "f_switch", "record_decimation", "initial_state"},
        path);
    s.dt = get_number(obj, "dt", s.dt, path);
    s.duration = get_number(obj, "duration", s.duration, path);
    s.f_switch = get_number(obj, "f_switch", s.f_switch, path);
    s.record_decimation = get_int(obj, "record_decimation", s.record_decimation, path);
    const std::string mode = get_string(obj, "model_mode", "averaged", path);
    if (mode == "averaged")
        s.mode = ModelMode::averaged;
    else if (mode == "switched")
        s.mode = ModelMode::switched;
    else
        throw ConfigError("\"sim.model_mode\" must be \"averaged\" or \"switched\"");
    if (obj.contains("initial_state")) {
        const auto& v = obj.at("initial_state");
        if (v.is_null()) {
            s.initial_state.reset();
        } else {
            if (!v.is_object()) throw ConfigError("\"sim.initial_state\" must be an object");
            reject_unknown(v, {"i_l", "v_dc"}, "sim.initial_state.");
            PlantState st;
            st.i_l = get_number(v, "i_l", 0.0, "sim.initial_state.");
            st.v_dc = get_number(v, "v_dc", 0.0, "sim.initial_state.");
            s.initial_state = st;
        }
    }
}

void parse_custom(const json& obj, CustomScenario& c) {
    const std::string path = "custom.";
    reject_unknown(obj,
                   {"v_ref_schedule", "v_in_schedule", "delay_base", "delay_amp", "delay_freq",
                    "events"},
                   path);
    c.v_ref_schedule = get_schedule(obj, "v_ref_schedule", c.v_ref_schedule, path);
    c.v_in_schedule = get_schedule(obj, "v_in_schedule", c.v_in_schedule, path);
    c.delay_base = get_number(obj, "delay_base", c.delay_base, path);
    c.delay_amp = get_number(obj, "delay_amp", c.delay_amp, path);
    c.delay_freq = get_number(obj, "delay_freq", c.delay_freq, path);
    if (obj.contains("events")) {
        const auto& v = obj.at("events");
        if (!v.is_array()) throw ConfigError("\"custom.events\" must be an array");
        c.events.clear();
        for (const auto& ev : v) {
            if (!ev.is_object()) throw ConfigError("\"custom.events\" entries must be objects");
            reject_unknown(ev, {"time", "kind"}, "custom.events.");
            MetricEvent me;
            me.time = get_number(ev, "time", 0.0, "custom.events.");
            const std::string kind = get_string(ev, "kind", "step", "custom.events.");
            if (kind == "step")
                me.kind = EventKind::step;
            else if (kind == "sag")
                me.kind = EventKind::sag;
            else
                throw ConfigError("\"custom.events.kind\" must be \"step\" or \"sag\"");
            c.events.push_back(me);
        }
    }
}

}  // namespace

ScenarioSpec RunConfig::make_scenario() const {
    if (scenario == "scenario1") return scenario1();
    if (scenario == "scenario2") return scenario2();
    ScenarioSpec spec;
    spec.name = "custom";
    spec.v_ref_schedule = PiecewiseConstant(custom.v_ref_schedule);
    spec.v_in_schedule = PiecewiseConstant(custom.v_in_schedule);
    if (custom.delay_base != 0.0 || custom.delay_amp != 0.0) {
        const double base = custom.delay_base;
        const double amp = custom.delay_amp;
        const double freq = custom.delay_freq;
        spec.delay_fn = [base, amp, freq](double t) {
            return base + amp * std::sin(2.0 * std::numbers::pi * freq * t);
        };
        spec.max_delay = base + std::abs(amp);
    }
    spec.events = custom.events;
    return spec;
}

ControllerConfig RunConfig::make_controller() const {
    ControllerConfig c;
    c.kind = controller == "esmc" ? ControllerKind::esmc : ControllerKind::gitsmbc;
    c.gitsmbc = gitsmbc;
    c.esmc = esmc;
    return c;
}

void RunConfig::validate() const {
    if (scenario != "scenario1" && scenario != "scenario2" && scenario != "custom")
        throw ConfigError("\"scenario\" must be scenario1, scenario2 or custom");
    if (controller != "gitsmbc" && controller != "esmc")
        throw ConfigError("\"controller\" must be gitsmbc or esmc");
    if (!(metrics_window > 0.0)) throw ConfigError("\"metrics_window\" must be > 0");
    if (!(settling_band_pct > 0.0)) throw ConfigError("\"settling_band_pct\" must be > 0");
    try {
        plant.validate();
        gitsmbc.validate();
        esmc.validate();
        sim.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    if (scenario == "custom") {
        if (custom.delay_base < 0.0 || custom.delay_base - std::abs(custom.delay_amp) < 0.0)
            throw ConfigError("custom delay must be non-negative for all t");
        for (const auto& ev : custom.events)
            if (ev.time < 0.0 || ev.time > sim.duration)
                throw ConfigError("custom event times must lie in [0, duration]");
    }
}

std::string RunConfig::resolved_json() const {
    json j;
    j["scenario"] = scenario;
    j["controller"] = controller;
    j["output_dir"] = output_dir;
    j["emit_plot"] = emit_plot;
    j["metrics_window"] = metrics_window;
    j["settling_band_pct"] = settling_band_pct;
    j["plant"] = {{"v_in_nominal", plant.v_in_nominal},
                  {"p_cpl", plant.p_cpl},
                  {"r_series", plant.r_series},
                  {"l_ind", plant.l_ind},
                  {"c_dc", plant.c_dc},
                  {"c_vir", plant.c_vir},
                  {"r_load", plant.r_load ? json(*plant.r_load) : json(nullptr)},
                  {"v_cpl_min", plant.v_cpl_min},
                  {"use_r_series", plant.use_r_series}};
    j["gitsmbc"] = {{"beta1", gitsmbc.beta1},
                    {"beta2", gitsmbc.beta2},
                    {"beta3", gitsmbc.beta3},
                    {"beta_ub1", gitsmbc.beta_ub1},
                    {"beta_ub2", gitsmbc.beta_ub2},
                    {"kappa_a", gitsmbc.kappa_a},
                    {"kappa_b", gitsmbc.kappa_b},
                    {"exp_x", gitsmbc.exp_x},
                    {"exp_y", gitsmbc.exp_y},
                    {"chi", gitsmbc.chi},
                    {"boundary_layer", gitsmbc.boundary_layer},
                    {"mu_min", gitsmbc.mu_min},
                    {"mu_max", gitsmbc.mu_max},
                    {"int_floor", gitsmbc.int_floor},
                    {"lambda_max", gitsmbc.lambda_max},
                    {"tau_max", gitsmbc.tau_max}};
    j["esmc"] = {{"lambda", esmc.lambda},
                 {"eta", esmc.eta},
                 {"boundary_layer", esmc.boundary_layer},
                 {"deriv_tau", esmc.deriv_tau},
                 {"mu_min", esmc.mu_min},
                 {"mu_max", esmc.mu_max}};
    j["sim"] = {{"dt", sim.dt},
                {"duration", sim.duration},
                {"model_mode", sim.mode == ModelMode::switched ? "switched" : "averaged"},
                {"f_switch", sim.f_switch},
                {"record_decimation", sim.record_decimation}};
    if (sim.initial_state)
        j["sim"]["initial_state"] = {{"i_l", sim.initial_state->i_l},
                                     {"v_dc", sim.initial_state->v_dc}};
    if (scenario == "custom") {
        json ev = json::array();
        for (const auto& e : custom.events)
            ev.push_back({{"time", e.time}, {"kind", e.kind == EventKind::sag ? "sag" : "step"}});
        j["custom"] = {{"v_ref_schedule", custom.v_ref_schedule},
                       {"v_in_schedule", custom.v_in_schedule},
                       {"delay_base", custom.delay_base},
                       {"delay_amp", custom.delay_amp},
                       {"delay_freq", custom.delay_freq},
                       {"events", ev}};
    }
    return j.dump();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");

    RunConfig cfg;
    reject_unknown(root,
                   {"scenario", "controller", "output_dir", "emit_plot", "metrics_window",
                    "settling_band_pct", "plant", "gitsmbc", "esmc", "sim", "custom"},
                   "");
    cfg.scenario = get_string(root, "scenario", cfg.scenario, "");
    cfg.controller = get_string(root, "controller", cfg.controller, "");
    cfg.output_dir = get_string(root, "output_dir", cfg.output_dir, "");
    cfg.emit_plot = get_bool(root, "emit_plot", cfg.emit_plot, "");
    cfg.metrics_window = get_number(root, "metrics_window", cfg.metrics_window, "");
    cfg.settling_band_pct = get_number(root, "settling_band_pct", cfg.settling_band_pct, "");
    if (root.contains("plant")) parse_plant(root.at("plant"), cfg.plant);
    if (root.contains("gitsmbc")) parse_gitsmbc(root.at("gitsmbc"), cfg.gitsmbc);
    if (root.contains("esmc")) parse_esmc(root.at("esmc"), cfg.esmc);
    if (root.contains("sim")) parse_sim(root.at("sim"), cfg.sim);
    if (root.contains("custom")) parse_custom(root.at("custom"), cfg.custom);
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

}  // namespace dcmg
