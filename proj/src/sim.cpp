#include "dcmg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcmg/errors.hpp"
#include "dcmg/transform.hpp"

namespace dcmg {

void SimConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) throw InvalidInput("sim.dt must be finite and > 0");
    if (!std::isfinite(duration) || duration < 0.0)
        throw InvalidInput("sim.duration must be finite and >= 0");
    if (record_decimation < 1) throw InvalidInput("sim.record_decimation must be >= 1");
    if (mode == ModelMode::switched) {
        if (!std::isfinite(f_switch) || f_switch <= 0.0)
            throw InvalidInput("sim.f_switch must be finite and > 0 in switched mode");
        if (dt > 1.0 / (10.0 * f_switch))
            throw InvalidInput("sim.dt must satisfy dt <= 1/(10*f_switch) in switched mode");
    }
    if (initial_state) {
        if (!std::isfinite(initial_state->i_l) || !std::isfinite(initial_state->v_dc))
            throw InvalidInput("sim.initial_state must be finite");
    }
}

PiecewiseConstant::PiecewiseConstant(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.empty()) throw InvalidInput("schedule needs at least one knot");
    if (!std::is_sorted(knots_.begin(), knots_.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw InvalidInput("schedule knots must be sorted by time");
}

double PiecewiseConstant::operator()(double t) const {
    double value = knots_.front().second;
    for (const auto& [time, v] : knots_) {
        if (time <= t)
            value = v;
        else
            break;
    }
    return value;
}

ScenarioSpec scenario1() {
    ScenarioSpec spec;
    spec.name = "scenario1";
    spec.v_ref_schedule = PiecewiseConstant({{0.0, 100.0}, {0.54, 150.0}});
    spec.v_in_schedule = PiecewiseConstant({{0.0, 50.0}});
    spec.events = {{0.0, EventKind::step}, {0.54, EventKind::step}};
    return spec;
}

ScenarioSpec scenario2() {
    ScenarioSpec spec;
    spec.name = "scenario2";
    spec.v_ref_schedule = PiecewiseConstant({{0.0, 100.0}});
    spec.v_in_schedule = PiecewiseConstant(
        {{0.0, 50.0}, {0.5, 40.0}, {0.6, 50.0}, {1.0, 40.0}, {1.1, 50.0}});
    spec.delay_fn = [](double t) {
        return 1.0e-3 + 0.5e-3 * std::sin(20.0 * std::numbers::pi * t);
    };
    spec.max_delay = 1.5e-3;
    spec.events = {{0.0, EventKind::step}, {0.5, EventKind::sag}, {1.0, EventKind::sag}};
    return spec;
}

DelayLine::DelayLine(double max_delay, double dt) : horizon_(max_delay + 2.0 * dt) {
    if (max_delay < 0.0) throw InvalidInput("DelayLine: max_delay must be >= 0");
}

void DelayLine::push(double t, double value) {
    samples_.emplace_back(t, value);
    // drop the front only once the next sample can still bracket the
    // oldest possible query time t - horizon
    while (samples_.size() > 2 && samples_[1].first <= t - horizon_) samples_.pop_front();
}

double DelayLine::sample(double t_query) const {
    if (samples_.empty()) throw InvalidInput("DelayLine: no samples stored");
    if (t_query <= samples_.front().first) return samples_.front().second;
    if (t_query >= samples_.back().first) return samples_.back().second;
    // linear interpolation between the bracketing samples
    auto upper = std::upper_bound(
        samples_.begin(), samples_.end(), t_query,
        [](double t, const std::pair<double, double>& s) { return t < s.first; });
    auto lower = std::prev(upper);
    const double span = upper->first - lower->first;
    if (span <= 0.0) return lower->second;
    const double w = (t_query - lower->first) / span;
    return lower->second + w * (upper->second - lower->second);
}

PlantState rk4_step(const std::function<PlantDerivative(const PlantState&)>& derivative_fn,
                    const PlantState& state, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("rk4_step: dt must be > 0");
    const auto advance = [](const PlantState& s, const PlantDerivative& d, double h) {
        return PlantState{s.i_l + h * d.di_l_dt, s.v_dc + h * d.dv_dc_dt};
    };
    const PlantDerivative k1 = derivative_fn(state);
    const PlantDerivative k2 = derivative_fn(advance(state, k1, 0.5 * dt));
    const PlantDerivative k3 = derivative_fn(advance(state, k2, 0.5 * dt));
    const PlantDerivative k4 = derivative_fn(advance(state, k3, dt));
    PlantState next;
    next.i_l = state.i_l + dt / 6.0 * (k1.di_l_dt + 2.0 * k2.di_l_dt + 2.0 * k3.di_l_dt + k4.di_l_dt);
    next.v_dc =
        state.v_dc + dt / 6.0 * (k1.dv_dc_dt + 2.0 * k2.dv_dc_dt + 2.0 * k3.dv_dc_dt + k4.dv_dc_dt);
    if (!std::isfinite(next.i_l) || !std::isfinite(next.v_dc))
        throw NumericalBlowup("rk4_step: non-finite state", 0.0);
    return next;
}

int pwm_modulate(double duty, double t, double f_switch) {
    if (!(duty >= 0.0 && duty <= 1.0)) throw InvalidInput("pwm_modulate: duty outside [0,1]");
    const double cycles = t * f_switch;
    const double phase = cycles - std::floor(cycles);
    return phase < duty ? 1 : 0;
}

namespace {

struct EngineController {
    const ControllerConfig& cfg;
    const PlantParams& params;
    ControllerState gitsmbc_state{};
    EsmcState esmc_state{};

    StepResult step(const PlantState& state, double v_ref, double v_in, double delta_p_vir,
                    double zeta1_extra, double dt) {
        const ReferenceFrame refs = reference_frame(v_ref, params, v_in);
        if (cfg.kind == ControllerKind::gitsmbc) {
            CanonicalState canon = to_canonical(state, params, v_in, delta_p_vir);
            canon.zeta1 += zeta1_extra;  // ED1 bookkeeping
            const LinearizationCoeffs coeffs =
                linearization_coeffs(state, params, v_in, delta_p_vir);
            return gitsmbc_step(canon, refs, coeffs, gitsmbc_state, cfg.gitsmbc, dt);
        }
        return esmc_step(state, refs, v_in, esmc_state, cfg.esmc, dt);
    }
};

}  // namespace

RunResult run_scenario(const ScenarioSpec& spec, const SimConfig& config,
                       const ControllerConfig& controller, const PlantParams& params,
                       double event_peak_window) {
    config.validate();
    params.validate();
    if (controller.kind == ControllerKind::gitsmbc)
        controller.gitsmbc.validate();
    else
        controller.esmc.validate();

    RunResult result;
    for (const auto& ev : spec.events) result.event_peaks.push_back({ev.time, 0.0});

    const double dt = config.dt;
    const long n_steps = std::lround(config.duration / dt);

    PlantState state;
    if (config.initial_state) {
        state = *config.initial_state;
    } else {
        const double v0 = spec.v_in_schedule(0.0);
        state = PlantState{params.p_cpl / v0, v0};
    }

    EngineController ctrl{controller, params};
    DelayLine delay_line(spec.max_delay, dt);
    // pre-history: the converter idled at the duty holding the initial
    // state before the controller engaged
    if (spec.delay_fn && spec.max_delay > 0.0) {
        const double v0 = spec.v_in_schedule(0.0);
        const double mu_idle =
            state.v_dc > 0.0 ? std::clamp(1.0 - v0 / state.v_dc, 0.0, 1.0) : 0.0;
        delay_line.push(-spec.max_delay - dt, mu_idle);
        delay_line.push(-dt, mu_idle);
    }

    double prev_dvdt = 0.0;   // accepted dV_dc/dt of the previous step
    double ed1_acc = 0.0;     // integral of ED1, bookkeeping only
    double p_dist = 0.0;      // integral of ED2: injected bus power [W]

    auto record = [&](double t, double v_ref, double v_in, double mu_cmd, double mu_app,
                      const ControlDiagnostics& d) {
        auto& ts = result.series;
        ts.time.push_back(t);
        ts.v_dc.push_back(state.v_dc);
        ts.i_l.push_back(state.i_l);
        ts.mu_commanded.push_back(mu_cmd);
        ts.mu_applied.push_back(mu_app);
        ts.v_ref.push_back(v_ref);
        ts.v_in.push_back(v_in);
        ts.e1.push_back(d.e1);
        ts.e2.push_back(d.e2);
        ts.sigma_s.push_back(d.sigma_s);
        ts.theta2.push_back(d.theta2);
    };

    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double v_ref = spec.v_ref_schedule(t);
        const double v_in = spec.v_in_schedule(t);
        const double delta_p_vir = virtual_power(state.v_dc, prev_dvdt, params.c_vir);

        StepResult cres;
        double mu_applied = 0.0;
        try {
            cres = ctrl.step(state, v_ref, v_in, delta_p_vir, ed1_acc, dt);
            delay_line.push(t, cres.mu);
            mu_applied =
                spec.delay_fn ? delay_line.sample(t - spec.delay_fn(t)) : cres.mu;
        } catch (const SingularLinearization& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        } catch (const ControllerFault& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        }

        if (k % config.record_decimation == 0 || k == n_steps)
            record(t, v_ref, v_in, cres.mu, mu_applied, cres.diag);
        if (k == n_steps) break;

        const double drive = config.mode == ModelMode::switched
                                 ? static_cast<double>(pwm_modulate(mu_applied, t, config.f_switch))
                                 : mu_applied;

        PlantState next;
        try {
            auto derivative_fn = [&](const PlantState& s) {
                PlantDerivative d = plant_derivatives(s, drive, v_in, params, prev_dvdt);
                if (p_dist != 0.0 && s.v_dc > 0.0)
                    d.dv_dc_dt += p_dist / s.v_dc / params.c_eff();
                return d;
            };
            next = rk4_step(derivative_fn, state, dt);
        } catch (const PlantCollapse& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        } catch (const NumericalBlowup& e) {
            result.aborted = true;
            result.abort_reason = e.what();
            result.abort_time = t;
            break;
        }

        if (next.v_dc <= 0.0 && params.p_cpl > 0.0) {
            result.aborted = true;
            result.abort_reason = "bus voltage reached zero with active CPL";
            result.abort_time = t + dt;
            break;
        }

        const double realized_dvdt = (next.v_dc - state.v_dc) / dt;
        const double mag = std::abs(realized_dvdt);
        result.peak_abs_dvdt = std::max(result.peak_abs_dvdt, mag);
        for (auto& peak : result.event_peaks) {
            if (t >= peak.event_time && t < peak.event_time + event_peak_window)
                peak.peak_abs_dvdt = std::max(peak.peak_abs_dvdt, mag);
        }

        if (spec.ed1_fn) ed1_acc += spec.ed1_fn(t) * dt;
        if (spec.ed2_fn) p_dist += spec.ed2_fn(t) * dt;
        prev_dvdt = realized_dvdt;
        state = next;
    }

    return result;
}

}  // namespace dcmg
