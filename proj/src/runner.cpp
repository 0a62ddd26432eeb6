#include "dcmg/runner.hpp"

#include <filesystem>
#include <iostream>
#include <set>

#include "dcmg/errors.hpp"
#include "dcmg/metrics.hpp"

namespace dcmg {

namespace {

namespace fs = std::filesystem;

std::string run_stem(const RunConfig& config) {
    return config.scenario + "_" + config.controller;
}

std::vector<MetricsRow> collect_metrics(const RunConfig& config, const ScenarioSpec& spec,
                                        const RunResult& result) {
    std::vector<MetricsRow> rows;
    for (std::size_t i = 0; i < spec.events.size(); ++i) {
        const auto& ev = spec.events[i];
        if (result.series.size() == 0 || ev.time > result.series.time.back()) continue;
        const double available = result.series.time.back() - ev.time;
        const double window = std::min(config.metrics_window, available);
        if (!(window > 0.0)) continue;
        MetricsRow row;
        row.event = ev;
        row.metrics = transient_metrics(result.series, ev.time, window, config.settling_band_pct,
                                        ev.kind);
        row.peak_abs_dvdt = result.event_peaks[i].peak_abs_dvdt;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

RunArtifacts execute_run(const RunConfig& config) {
    config.validate();
    const ScenarioSpec spec = config.make_scenario();
    const ControllerConfig controller = config.make_controller();

    RunArtifacts artifacts;
    artifacts.result =
        run_scenario(spec, config.sim, controller, config.plant, config.metrics_window);
    artifacts.metrics = collect_metrics(config, spec, artifacts.result);

    fs::create_directories(config.output_dir);
    const std::string stem = (fs::path(config.output_dir) / run_stem(config)).string();
    const std::string resolved = config.resolved_json();

    artifacts.timeseries_path = stem + "_timeseries.csv";
    write_timeseries_csv(artifacts.timeseries_path, artifacts.result.series, resolved,
                         artifacts.result);
    artifacts.metrics_path = stem + "_metrics.csv";
    write_metrics_csv(artifacts.metrics_path, artifacts.metrics, resolved, artifacts.result);

    if (config.emit_plot) {
        try {
            artifacts.plot_path = stem + "_vdc.svg";
            write_voltage_svg(artifacts.plot_path, artifacts.result.series);
        } catch (const std::exception& e) {
            std::cerr << "warning: plot emission failed (" << e.what() << "); CSV outputs kept\n";
            artifacts.plot_path.clear();
        }
    }
    return artifacts;
}

CompareArtifacts execute_compare(const RunConfig& config) {
    RunConfig base = config;
    base.controller = "esmc";
    RunConfig proposed = config;
    proposed.controller = "gitsmbc";

    CompareArtifacts artifacts;
    artifacts.esmc = execute_run(base);
    artifacts.gitsmbc = execute_run(proposed);

    const std::string path =
        (std::filesystem::path(config.output_dir) / (config.scenario + "_compare.csv")).string();
    write_compare_csv(path, artifacts.esmc.metrics, artifacts.gitsmbc.metrics,
                      config.resolved_json());
    artifacts.compare_path = path;
    return artifacts;
}

bool is_sweepable_parameter(const std::string& name) {
    static const std::set<std::string> keys = {
        "c_vir", "c_dc", "p_cpl", "v_cpl_min", "chi",   "beta1",  "beta2",
        "beta3", "kappa_a", "kappa_b", "boundary_layer", "lambda", "eta"};
    return keys.count(name) > 0;
}

RunConfig with_parameter(RunConfig config, const std::string& parameter, double value) {
    if (parameter == "c_vir")
        config.plant.c_vir = value;
    else if (parameter == "c_dc")
        config.plant.c_dc = value;
    else if (parameter == "p_cpl")
        config.plant.p_cpl = value;
    else if (parameter == "v_cpl_min")
        config.plant.v_cpl_min = value;
    else if (parameter == "chi")
        config.gitsmbc.chi = value;
    else if (parameter == "beta1")
        config.gitsmbc.beta1 = value;
    else if (parameter == "beta2")
        config.gitsmbc.beta2 = value;
    else if (parameter == "beta3")
        config.gitsmbc.beta3 = value;
    else if (parameter == "kappa_a")
        config.gitsmbc.kappa_a = value;
    else if (parameter == "kappa_b")
        config.gitsmbc.kappa_b = value;
    else if (parameter == "boundary_layer")
        config.gitsmbc.boundary_layer = value;
    else if (parameter == "lambda")
        config.esmc.lambda = value;
    else if (parameter == "eta")
        config.esmc.eta = value;
    else
        throw ConfigError("unknown sweep parameter \"" + parameter + "\"");
    return config;
}

SweepArtifacts execute_sweep(const RunConfig& config, const std::string& parameter,
                             const std::vector<double>& values) {
    if (!is_sweepable_parameter(parameter))
        throw ConfigError("unknown sweep parameter \"" + parameter + "\"");
    if (values.empty()) throw ConfigError("sweep requires at least one value");

    SweepArtifacts artifacts;
    for (double value : values) {
        RunConfig point = with_parameter(config, parameter, value);
        point.validate();
        const ScenarioSpec spec = point.make_scenario();
        RunResult result =
            run_scenario(spec, point.sim, point.make_controller(), point.plant,
                         point.metrics_window);
        artifacts.rows.emplace_back(value, collect_metrics(point, spec, result));
        artifacts.results.push_back(std::move(result));
    }

    std::filesystem::create_directories(config.output_dir);
    const std::string path =
        (std::filesystem::path(config.output_dir) /
         (run_stem(config) + "_sweep_" + parameter + ".csv"))
            .string();
    write_sweep_csv(path, parameter, artifacts.rows, config.resolved_json());
    artifacts.sweep_path = path;
    return artifacts;
}

namespace {

void print_metrics(std::ostream& out, const std::string& label,
                   const std::vector<MetricsRow>& rows) {
    out << label << ":\n";
    for (const auto& row : rows) {
        out << "  t=" << format_value(row.event.time)
            << (row.event.kind == EventKind::sag ? " (sag)" : " (step)")
            << "  OS=" << format_value(row.metrics.overshoot_pct) << "%"
            << "  US=" << format_value(row.metrics.undershoot_pct) << "%"
            << "  ST=" << format_value(row.metrics.settling_time * 1e3) << "ms"
            << (row.metrics.settled ? "" : " (not settled)") << "\n";
    }
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        RunArtifacts artifacts = execute_run(config);
        print_metrics(out, config.scenario + " / " + config.controller, artifacts.metrics);
        out << "wrote " << artifacts.timeseries_path << "\n";
        out << "wrote " << artifacts.metrics_path << "\n";
        if (!artifacts.plot_path.empty()) out << "wrote " << artifacts.plot_path << "\n";
        if (artifacts.result.aborted) {
            err << "simulation aborted: " << artifacts.result.abort_reason << " at t="
                << format_value(artifacts.result.abort_time) << " (partial outputs flagged)\n";
            return kExitSimAborted;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        CompareArtifacts artifacts = execute_compare(config);
        print_metrics(out, config.scenario + " / esmc", artifacts.esmc.metrics);
        print_metrics(out, config.scenario + " / gitsmbc", artifacts.gitsmbc.metrics);
        const std::size_t n =
            std::min(artifacts.esmc.metrics.size(), artifacts.gitsmbc.metrics.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto red =
                compare_report(artifacts.esmc.metrics[i].metrics, artifacts.gitsmbc.metrics[i].metrics);
            out << "reductions at t=" << format_value(artifacts.esmc.metrics[i].event.time) << ": ";
            auto show = [&](const char* name, const std::optional<double>& v) {
                out << name << "=" << (v ? format_value(*v) + "%" : std::string("n/a")) << " ";
            };
            show("OS", red.overshoot_pct);
            show("US", red.undershoot_pct);
            show("ST", red.settling_time);
            out << "\n";
        }
        out << "wrote " << artifacts.compare_path << "\n";
        if (artifacts.esmc.result.aborted || artifacts.gitsmbc.result.aborted) {
            err << "simulation aborted during compare\n";
            return kExitSimAborted;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_sweep(const RunConfig& config, const std::string& parameter,
              const std::vector<double>& values, std::ostream& out, std::ostream& err) {
    try {
        SweepArtifacts artifacts = execute_sweep(config, parameter, values);
        out << "swept " << parameter << " over " << values.size() << " value(s)\n";
        out << "wrote " << artifacts.sweep_path << "\n";
        for (const auto& result : artifacts.results) {
            if (result.aborted) {
                err << "simulation aborted during sweep\n";
                return kExitSimAborted;
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
    try {
        RunConfig config = load_config(config_path);
        out << "config ok: " << config.resolved_json() << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace dcmg
