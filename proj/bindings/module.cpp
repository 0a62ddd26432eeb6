#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dcmg/config.hpp"
#include "dcmg/errors.hpp"
#include "dcmg/metrics.hpp"
#include "dcmg/runner.hpp"

namespace py = pybind11;
using namespace dcmg;

namespace {

ScenarioSpec scenario_by_name(const std::string& name) {
    if (name == "scenario1") return scenario1();
    if (name == "scenario2") return scenario2();
    throw py::value_error("scenario must be \"scenario1\" or \"scenario2\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DC microgrid boost-converter control workbench (C++ core)";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<PlantParams>(m, "PlantParams")
        .def(py::init<>())
        .def_readwrite("v_in_nominal", &PlantParams::v_in_nominal)
        .def_readwrite("p_cpl", &PlantParams::p_cpl)
        .def_readwrite("r_series", &PlantParams::r_series)
        .def_readwrite("l_ind", &PlantParams::l_ind)
        .def_readwrite("c_dc", &PlantParams::c_dc)
        .def_readwrite("c_vir", &PlantParams::c_vir)
        .def_readwrite("r_load", &PlantParams::r_load)
        .def_readwrite("v_cpl_min", &PlantParams::v_cpl_min)
        .def_readwrite("use_r_series", &PlantParams::use_r_series)
        .def("c_eff", &PlantParams::c_eff)
        .def("validate", &PlantParams::validate);

    py::class_<PlantState>(m, "PlantState")
        .def(py::init<>())
        .def(py::init([](double i_l, double v_dc) { return PlantState{i_l, v_dc}; }),
             py::arg("i_l"), py::arg("v_dc"))
        .def_readwrite("i_l", &PlantState::i_l)
        .def_readwrite("v_dc", &PlantState::v_dc);

    py::class_<PlantDerivative>(m, "PlantDerivative")
        .def_readonly("di_l_dt", &PlantDerivative::di_l_dt)
        .def_readonly("dv_dc_dt", &PlantDerivative::dv_dc_dt);

    py::class_<CanonicalState>(m, "CanonicalState")
        .def_readonly("zeta1", &CanonicalState::zeta1)
        .def_readonly("zeta2", &CanonicalState::zeta2);

    py::class_<GitsmbcGains>(m, "GitsmbcGains")
        .def(py::init<>())
        .def_readwrite("beta1", &GitsmbcGains::beta1)
        .def_readwrite("beta2", &GitsmbcGains::beta2)
        .def_readwrite("beta3", &GitsmbcGains::beta3)
        .def_readwrite("beta_ub1", &GitsmbcGains::beta_ub1)
        .def_readwrite("beta_ub2", &GitsmbcGains::beta_ub2)
        .def_readwrite("kappa_a", &GitsmbcGains::kappa_a)
        .def_readwrite("kappa_b", &GitsmbcGains::kappa_b)
        .def_readwrite("exp_x", &GitsmbcGains::exp_x)
        .def_readwrite("exp_y", &GitsmbcGains::exp_y)
        .def_readwrite("chi", &GitsmbcGains::chi)
        .def_readwrite("boundary_layer", &GitsmbcGains::boundary_layer)
        .def_readwrite("mu_min", &GitsmbcGains::mu_min)
        .def_readwrite("mu_max", &GitsmbcGains::mu_max);

    py::class_<EsmcGains>(m, "EsmcGains")
        .def(py::init<>())
        .def_readwrite("lambda_", &EsmcGains::lambda)
        .def_readwrite("eta", &EsmcGains::eta)
        .def_readwrite("boundary_layer", &EsmcGains::boundary_layer)
        .def_readwrite("deriv_tau", &EsmcGains::deriv_tau)
        .def_readwrite("mu_min", &EsmcGains::mu_min)
        .def_readwrite("mu_max", &EsmcGains::mu_max);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("duration", &SimConfig::duration)
        .def_readwrite("f_switch", &SimConfig::f_switch)
        .def_readwrite("record_decimation", &SimConfig::record_decimation)
        .def_readwrite("initial_state", &SimConfig::initial_state)
        .def_property(
            "model_mode",
            [](const SimConfig& c) {
                return c.mode == ModelMode::switched ? "switched" : "averaged";
            },
            [](SimConfig& c, const std::string& mode) {
                if (mode == "averaged")
                    c.mode = ModelMode::averaged;
                else if (mode == "switched")
                    c.mode = ModelMode::switched;
                else
                    throw py::value_error("model_mode must be averaged or switched");
            });

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("time", &TimeSeries::time)
        .def_readonly("v_dc", &TimeSeries::v_dc)
        .def_readonly("i_l", &TimeSeries::i_l)
        .def_readonly("mu_commanded", &TimeSeries::mu_commanded)
        .def_readonly("mu_applied", &TimeSeries::mu_applied)
        .def_readonly("v_ref", &TimeSeries::v_ref)
        .def_readonly("v_in", &TimeSeries::v_in)
        .def_readonly("e1", &TimeSeries::e1)
        .def_readonly("e2", &TimeSeries::e2)
        .def_readonly("sigma_s", &TimeSeries::sigma_s)
        .def_readonly("theta2", &TimeSeries::theta2)
        .def("__len__", &TimeSeries::size);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("series", &RunResult::series)
        .def_readonly("aborted", &RunResult::aborted)
        .def_readonly("abort_reason", &RunResult::abort_reason)
        .def_readonly("abort_time", &RunResult::abort_time)
        .def_readonly("peak_abs_dvdt", &RunResult::peak_abs_dvdt);

    py::class_<TransientMetrics>(m, "TransientMetrics")
        .def_readonly("event_time", &TransientMetrics::event_time)
        .def_readonly("reference", &TransientMetrics::reference)
        .def_readonly("overshoot_pct", &TransientMetrics::overshoot_pct)
        .def_readonly("undershoot_pct", &TransientMetrics::undershoot_pct)
        .def_readonly("settling_time", &TransientMetrics::settling_time)
        .def_readonly("settled", &TransientMetrics::settled)
        .def_readonly("steady_state_error_pct", &TransientMetrics::steady_state_error_pct)
        .def_readonly("peak_v", &TransientMetrics::peak_v)
        .def_readonly("trough_v", &TransientMetrics::trough_v);

    m.def("cpl_current", &cpl_current, py::arg("p_cpl"), py::arg("v_dc"), py::arg("v_cpl_min"));
    m.def("nii_impedance", &nii_impedance, py::arg("p_cpl"), py::arg("v_dc"));
    m.def("effective_capacitance", &effective_capacitance, py::arg("c_dc"), py::arg("c_vir"));
    m.def("virtual_power", &virtual_power, py::arg("v_dc"), py::arg("dv_dc_dt"), py::arg("c_vir"));
    m.def(
        "plant_derivatives",
        [](const PlantState& s, double mu, double v_in, const PlantParams& p, double prev) {
            return plant_derivatives(s, mu, v_in, p, prev);
        },
        py::arg("state"), py::arg("mu"), py::arg("v_in"), py::arg("params"),
        py::arg("prev_dv_dc_dt") = 0.0);
    m.def(
        "to_canonical",
        [](const PlantState& s, const PlantParams& p, double v_in, double dpv) {
            return to_canonical(s, p, v_in, dpv);
        },
        py::arg("state"), py::arg("params"), py::arg("v_in"), py::arg("delta_p_vir") = 0.0);
    m.def("signed_fractional_power", &signed_fractional_power, py::arg("u"), py::arg("p"));
    m.def("analytic_convergence_time", &analytic_convergence_time, py::arg("sigma0"),
          py::arg("beta3"), py::arg("chi"));
    m.def(
        "sliding_surface",
        [](double e2, double int_e2, const GitsmbcGains& g) { return sliding_surface(e2, int_e2, g); },
        py::arg("e2"), py::arg("int_e2"), py::arg("gains") = GitsmbcGains{});
    m.def(
        "ifprl_rate",
        [](double sigma, const GitsmbcGains& g) { return ifprl_rate(sigma, g); },
        py::arg("sigma"), py::arg("gains") = GitsmbcGains{});

    m.def(
        "run_scenario",
        [](const std::string& scenario, const std::string& controller, const PlantParams& params,
           const SimConfig& sim, const GitsmbcGains& gitsmbc, const EsmcGains& esmc) {
            ControllerConfig ctrl;
            ctrl.kind = controller == "esmc" ? ControllerKind::esmc : ControllerKind::gitsmbc;
            ctrl.gitsmbc = gitsmbc;
            ctrl.esmc = esmc;
            return run_scenario(scenario_by_name(scenario), sim, ctrl, params);
        },
        py::arg("scenario"), py::arg("controller") = "gitsmbc",
        py::arg("params") = PlantParams{}, py::arg("sim") = SimConfig{},
        py::arg("gitsmbc") = GitsmbcGains{}, py::arg("esmc") = EsmcGains{},
        "Run scenario1 or scenario2 and return the recorded trajectory.");

    m.def(
        "transient_metrics",
        [](const TimeSeries& ts, double event_time, double window, double band_pct,
           const std::string& kind) {
            return transient_metrics(ts, event_time, window, band_pct,
                                     kind == "sag" ? EventKind::sag : EventKind::step);
        },
        py::arg("series"), py::arg("event_time"), py::arg("window"), py::arg("band_pct") = 2.0,
        py::arg("kind") = "step");

    m.def(
        "compare_report",
        [](const TransientMetrics& a, const TransientMetrics& b) {
            const auto red = compare_report(a, b);
            py::dict out;
            auto set = [&](const char* key, const std::optional<double>& v) {
                out[key] = v ? py::object(py::float_(*v)) : py::none();
            };
            set("overshoot_pct", red.overshoot_pct);
            set("undershoot_pct", red.undershoot_pct);
            set("settling_time", red.settling_time);
            set("steady_state_error_pct", red.steady_state_error_pct);
            return out;
        },
        py::arg("baseline"), py::arg("proposed"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
