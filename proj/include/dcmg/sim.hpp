#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dcmg/control.hpp"
#include "dcmg/plant.hpp"

namespace dcmg {

enum class ModelMode { averaged, switched };

struct SimConfig {
    double dt = 1e-5;        // 100 kHz sampling
    double duration = 1.5;   // [s]
    ModelMode mode = ModelMode::averaged;
    double f_switch = 1e4;   // PWM carrier [Hz], switched mode only
    int record_decimation = 10;
    // When unset, the engine starts from the pre-engagement diode
    // equilibrium: v_dc = v_in(0), i_l = p_cpl / v_in(0).
    std::optional<PlantState> initial_state{};

    void validate() const;
};

/// Left-continuous step schedule: value of the last knot at or before t.
class PiecewiseConstant {
public:
    PiecewiseConstant() = default;
    explicit PiecewiseConstant(std::vector<std::pair<double, double>> knots);
    double operator()(double t) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

enum class EventKind { step, sag };

struct MetricEvent {
    double time = 0.0;
    EventKind kind = EventKind::step;
};

struct ScenarioSpec {
    std::string name;
    PiecewiseConstant v_ref_schedule;
    PiecewiseConstant v_in_schedule;
    std::function<double(double)> delay_fn;  // empty = no delay
    double max_delay = 0.0;                  // bound for buffer sizing
    std::function<double(double)> ed1_fn;    // [W], empty = 0
    std::function<double(double)> ed2_fn;    // [W/s], empty = 0
    std::vector<MetricEvent> events;
};

/// Scenario 1: reference step 100 V -> 150 V at t = 0.54 s, 50 V supply.
ScenarioSpec scenario1();

/// Scenario 2: 100 V reference, supply sags 50 -> 40 V at t = 0.5 s and
/// t = 1.0 s for 0.1 s each, time-varying control delay
/// t_d = 0.001 + 0.0005*sin(20*pi*t).
ScenarioSpec scenario2();

/// Ring buffer of past duty commands with linear interpolation.
class DelayLine {
public:
    DelayLine(double max_delay, double dt);
    void push(double t, double value);
    /// Value at t_query; clamps to the oldest sample before history exists.
    double sample(double t_query) const;

private:
    std::deque<std::pair<double, double>> samples_;
    double horizon_;
};

/// Classical fixed-step RK4 with inputs held over the step.
/// Throws NumericalBlowup on a non-finite result.
PlantState rk4_step(const std::function<PlantDerivative(const PlantState&)>& derivative_fn,
                    const PlantState& state, double dt);

/// PWM comparator: 1 while the carrier phase is below the duty.
int pwm_modulate(double duty, double t, double f_switch);

/// Recorded trajectory, uniformly sampled at dt * record_decimation.
struct TimeSeries {
    std::vector<double> time;
    std::vector<double> v_dc;
    std::vector<double> i_l;
    std::vector<double> mu_commanded;
    std::vector<double> mu_applied;
    std::vector<double> v_ref;
    std::vector<double> v_in;
    std::vector<double> e1;
    std::vector<double> e2;
    std::vector<double> sigma_s;
    std::vector<double> theta2;

    std::size_t size() const { return time.size(); }
};

enum class ControllerKind { gitsmbc, esmc };

struct ControllerConfig {
    ControllerKind kind = ControllerKind::gitsmbc;
    GitsmbcGains gitsmbc;
    EsmcGains esmc;
};

/// Full-rate |dV_dc/dt| peak over (event, event + window].
struct EventPeak {
    double event_time = 0.0;
    double peak_abs_dvdt = 0.0;
};

struct RunResult {
    TimeSeries series;
    std::vector<EventPeak> event_peaks;
    bool aborted = false;
    std::string abort_reason;
    double abort_time = 0.0;
    double peak_abs_dvdt = 0.0;  // over the whole run
};

/// Closed-loop engine: schedules -> references -> controller -> delay ->
/// (PWM) -> RK4. Deterministic; aborts return the partial series.
RunResult run_scenario(const ScenarioSpec& spec, const SimConfig& config,
                       const ControllerConfig& controller, const PlantParams& params,
                       double event_peak_window = 0.3);

}  // namespace dcmg
