#pragma once

#include <optional>
#include <vector>

#include "dcmg/sim.hpp"

namespace dcmg {

struct TransientMetrics {
    double event_time = 0.0;
    double reference = 0.0;
    double overshoot_pct = 0.0;
    double undershoot_pct = 0.0;
    double settling_time = 0.0;   // [s] from event_time
    bool settled = true;
    double steady_state_error_pct = 0.0;
    double peak_v = 0.0;
    double trough_v = 0.0;
};

/**
 * Transient figures of merit over [event_time, event_time + window].
 *
 * Overshoot is the peak excursion above the post-event reference.
 * Undershoot depends on the event kind: for reference steps it is the
 * dip after the response first crosses the reference; for supply sags
 * (reference unchanged) it is the dip below the reference over the
 * whole window. Settling time is the last departure from the
 * +-band_pct band; a series still outside the band at the window end
 * reports settling_time == window with settled = false.
 */
TransientMetrics transient_metrics(const TimeSeries& ts, double event_time, double window,
                                   double band_pct = 2.0, EventKind kind = EventKind::step);

struct LyapunovViolation {
    double t_start = 0.0;
    double t_end = 0.0;
    double max_rise = 0.0;  // largest increase inside the interval
};

struct LyapunovReport {
    std::vector<double> theta2;
    std::vector<LyapunovViolation> violations;
};

/**
 * Composite Lyapunov value 0.5*e1^2 + 0.5*sigma_s^2 per sample, plus a
 * monotonicity report: intervals (outside exclusion windows after each
 * event) where theta2 rose by more than tol_frac of its local peak.
 * The local peak resets at each event.
 */
LyapunovReport lyapunov_trace(const TimeSeries& ts, const std::vector<MetricEvent>& events = {},
                              double exclusion_window = 1e-3, double tol_frac = 0.01);

/// Reduction percentages of b relative to a; no value when a's metric is 0.
struct MetricReduction {
    std::optional<double> overshoot_pct;
    std::optional<double> undershoot_pct;
    std::optional<double> settling_time;
    std::optional<double> steady_state_error_pct;
};

MetricReduction compare_report(const TransientMetrics& a, const TransientMetrics& b);

}  // namespace dcmg
