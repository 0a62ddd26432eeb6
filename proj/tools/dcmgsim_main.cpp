#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcmg/errors.hpp"
#include "dcmg/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string controller;
    int scenario = 0;
    std::string out_dir;
    bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "path to a JSON run config");
    if (config_required) c->required();
    cmd->add_option("--controller", opts.controller, "override controller: gitsmbc | esmc")
        ->check(CLI::IsMember({"gitsmbc", "esmc"}));
    cmd->add_option("--scenario", opts.scenario, "override scenario: 1 | 2")
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--out", opts.out_dir, "override output directory");
    cmd->add_flag("--plot", opts.plot, "emit an SVG plot of v_dc vs time");
}

int load_with_overrides(const CommonOpts& opts, dcmg::RunConfig& config) {
    try {
        config = dcmg::load_config(opts.config_path);
    } catch (const dcmg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dcmg::kExitConfigError;
    }
    if (!opts.controller.empty()) config.controller = opts.controller;
    if (opts.scenario == 1) config.scenario = "scenario1";
    if (opts.scenario == 2) config.scenario = "scenario2";
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.plot) config.emit_plot = true;
    return dcmg::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcmgsim - DC microgrid boost-converter control workbench"};
    app.require_subcommand(1);

    CommonOpts run_opts, compare_opts, sweep_opts, validate_opts;
    std::string sweep_param;
    std::vector<double> sweep_values;

    auto* run_cmd = app.add_subcommand("run", "simulate one scenario with one controller");
    add_common(run_cmd, run_opts);

    auto* compare_cmd =
        app.add_subcommand("compare", "run both controllers and emit side-by-side metrics");
    add_common(compare_cmd, compare_opts);

    auto* sweep_cmd = app.add_subcommand("sweep", "one run per value of a sweepable parameter");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--param", sweep_param, "parameter to sweep (e.g. c_vir, chi)")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
    validate_cmd->add_option("--config", validate_opts.config_path, "path to a JSON run config")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        dcmg::RunConfig config;
        if (int rc = load_with_overrides(run_opts, config)) return rc;
        return dcmg::cmd_run(config, std::cout, std::cerr);
    }
    if (compare_cmd->parsed()) {
        dcmg::RunConfig config;
        if (int rc = load_with_overrides(compare_opts, config)) return rc;
        return dcmg::cmd_compare(config, std::cout, std::cerr);
    }
    if (sweep_cmd->parsed()) {
        dcmg::RunConfig config;
        if (int rc = load_with_overrides(sweep_opts, config)) return rc;
        return dcmg::cmd_sweep(config, sweep_param, sweep_values, std::cout, std::cerr);
    }
    return dcmg::cmd_validate(validate_opts.config_path, std::cout, std::cerr);
}
