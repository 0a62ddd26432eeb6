#pragma once

#include <string>
#include <vector>

#include "dcmg/control.hpp"
#include "dcmg/plant.hpp"
#include "dcmg/sim.hpp"

namespace dcmg {

/// Custom-scenario description; only used when scenario == "custom".
struct CustomScenario {
    std::vector<std::pair<double, double>> v_ref_schedule{{0.0, 100.0}};
    std::vector<std::pair<double, double>> v_in_schedule{{0.0, 50.0}};
    double delay_base = 0.0;   // t_d = base + amp * sin(2*pi*freq*t)
    double delay_amp = 0.0;
    double delay_freq = 0.0;
    std::vector<MetricEvent> events{{0.0, EventKind::step}};
};

/// File-borne run description. Defaults reproduce the nominal test
/// system; every field can be overridden from the config file.
struct RunConfig {
    std::string scenario = "scenario1";    // scenario1 | scenario2 | custom
    std::string controller = "gitsmbc";    // gitsmbc | esmc
    std::string output_dir = "out";
    bool emit_plot = false;
    double metrics_window = 0.3;           // peak-search window per event [s]
    double settling_band_pct = 2.0;
    PlantParams plant;
    GitsmbcGains gitsmbc;
    EsmcGains esmc;
    SimConfig sim;
    CustomScenario custom;

    ScenarioSpec make_scenario() const;
    ControllerConfig make_controller() const;
    void validate() const;

    /// Canonical single-line JSON of the fully resolved config.
    std::string resolved_json() const;
};

/// Parse and validate a config file. Unknown keys are rejected; parse
/// and validation errors carry the file position or field path.
RunConfig load_config(const std::string& path);

/// Parse a config from a JSON string (used by tests and bindings).
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace dcmg
