#pragma once

#include <string>
#include <vector>

#include "dcmg/metrics.hpp"
#include "dcmg/sim.hpp"

namespace dcmg {

/// Fixed time-series CSV header row.
inline constexpr const char* kTimeSeriesHeader =
    "time,v_dc,i_l,mu_commanded,mu_applied,v_ref,v_in,e1,e2,sigma_s,theta2";

/// Fixed metrics CSV header row.
inline constexpr const char* kMetricsHeader =
    "event_time,event_kind,reference,overshoot_pct,undershoot_pct,settling_time_s,settled,"
    "steady_state_error_pct,peak_v,trough_v,peak_abs_dvdt";

/// Stable shortest-roundtrip formatting used in every emitted file.
std::string format_value(double v);

struct MetricsRow {
    MetricEvent event;
    TransientMetrics metrics;
    double peak_abs_dvdt = 0.0;
};

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const std::string& config_json, const RunResult& result);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows,
                       const std::string& config_json, const RunResult& result);

void write_compare_csv(const std::string& path, const std::vector<MetricsRow>& baseline,
                       const std::vector<MetricsRow>& proposed,
                       const std::string& config_json);

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<std::pair<double, std::vector<MetricsRow>>>& rows,
                     const std::string& config_json);

/// v_dc vs time with the reference overlay, as a standalone SVG.
void write_voltage_svg(const std::string& path, const TimeSeries& ts);

}  // namespace dcmg
