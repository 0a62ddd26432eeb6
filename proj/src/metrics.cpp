#include "dcmg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dcmg/errors.hpp"

namespace dcmg {

TransientMetrics transient_metrics(const TimeSeries& ts, double event_time, double window,
                                   double band_pct, EventKind kind) {
    if (ts.size() == 0) throw InvalidInput("transient_metrics: empty series");
    if (!(window > 0.0)) throw InvalidInput("transient_metrics: window must be > 0");

    std::size_t first = ts.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts.time[i] >= event_time && ts.time[i] <= event_time + window) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first >= ts.size() || last < first)
        throw InvalidInput("transient_metrics: window outside the series");

    const double ref = ts.v_ref[first];

    TransientMetrics m;
    m.event_time = event_time;
    m.reference = ref;

    double vmax = ts.v_dc[first];
    double vmin_all = ts.v_dc[first];
    for (std::size_t i = first; i <= last; ++i) {
        vmax = std::max(vmax, ts.v_dc[i]);
        vmin_all = std::min(vmin_all, ts.v_dc[i]);
    }
    m.peak_v = vmax;
    m.overshoot_pct = std::max(0.0, vmax - ref) / ref * 100.0;

    if (kind == EventKind::sag) {
        m.trough_v = vmin_all;
        m.undershoot_pct = std::max(0.0, ref - vmin_all) / ref * 100.0;
    } else {
        // dip after the first crossing of the reference
        const double initial_side = ts.v_dc[first] - ref;
        std::size_t crossing = last + 1;
        for (std::size_t i = first; i <= last; ++i) {
            const double side = ts.v_dc[i] - ref;
            if (side == 0.0 || initial_side == 0.0 || (side > 0.0) != (initial_side > 0.0)) {
                crossing = i;
                break;
            }
        }
        if (crossing <= last) {
            double vmin = ts.v_dc[crossing];
            for (std::size_t i = crossing; i <= last; ++i) vmin = std::min(vmin, ts.v_dc[i]);
            m.trough_v = vmin;
            m.undershoot_pct = std::max(0.0, ref - vmin) / ref * 100.0;
        } else {
            m.trough_v = ref;
            m.undershoot_pct = 0.0;
        }
    }

    const double band = band_pct / 100.0 * ref;
    std::size_t last_out = first;
    bool ever_out = false;
    for (std::size_t i = first; i <= last; ++i) {
        if (std::abs(ts.v_dc[i] - ref) > band) {
            last_out = i;
            ever_out = true;
        }
    }
    if (!ever_out) {
        m.settling_time = 0.0;
        m.settled = true;
    } else if (last_out == last) {
        m.settling_time = window;
        m.settled = false;
    } else {
        m.settling_time = ts.time[last_out + 1] - event_time;
        m.settled = true;
    }

    // steady-state error over the final tenth of the window
    const double tail_start = event_time + 0.9 * window;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = first; i <= last; ++i) {
        if (ts.time[i] >= tail_start) {
            sum += ts.v_dc[i];
            ++count;
        }
    }
    if (count == 0) {
        sum = ts.v_dc[last];
        count = 1;
    }
    m.steady_state_error_pct = std::abs(sum / count - ref) / ref * 100.0;
    return m;
}

LyapunovReport lyapunov_trace(const TimeSeries& ts, const std::vector<MetricEvent>& events,
                              double exclusion_window, double tol_frac) {
    LyapunovReport report;
    report.theta2.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        report.theta2.push_back(0.5 * ts.e1[i] * ts.e1[i] + 0.5 * ts.sigma_s[i] * ts.sigma_s[i]);

    auto excluded = [&](double t) {
        for (const auto& ev : events)
            if (t >= ev.time && t < ev.time + exclusion_window) return true;
        return false;
    };
    auto event_boundary = [&](double t_prev, double t_cur) {
        for (const auto& ev : events)
            if (t_prev < ev.time && t_cur >= ev.time) return true;
        return false;
    };

    double local_peak = ts.size() ? report.theta2.front() : 0.0;
    bool in_violation = false;
    LyapunovViolation current;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (event_boundary(ts.time[i - 1], ts.time[i])) local_peak = report.theta2[i];
        local_peak = std::max(local_peak, report.theta2[i]);
        const double rise = report.theta2[i] - report.theta2[i - 1];
        const bool violating =
            !excluded(ts.time[i]) && !excluded(ts.time[i - 1]) && rise > tol_frac * local_peak;
        if (violating) {
            if (!in_violation) {
                in_violation = true;
                current = LyapunovViolation{ts.time[i - 1], ts.time[i], rise};
            } else {
                current.t_end = ts.time[i];
                current.max_rise = std::max(current.max_rise, rise);
            }
        } else if (in_violation) {
            report.violations.push_back(current);
            in_violation = false;
        }
    }
    if (in_violation) report.violations.push_back(current);
    return report;
}

MetricReduction compare_report(const TransientMetrics& a, const TransientMetrics& b) {
    auto reduction = [](double base, double improved) -> std::optional<double> {
        if (base == 0.0) return std::nullopt;
        return (base - improved) / base * 100.0;
    };
    MetricReduction out;
    out.overshoot_pct = reduction(a.overshoot_pct, b.overshoot_pct);
    out.undershoot_pct = reduction(a.undershoot_pct, b.undershoot_pct);
    out.settling_time = reduction(a.settling_time, b.settling_time);
    out.steady_state_error_pct = reduction(a.steady_state_error_pct, b.steady_state_error_pct);
    return out;
}

}  // namespace dcmg
