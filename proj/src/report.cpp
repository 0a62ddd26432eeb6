#include "dcmg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dcmg/errors.hpp"

namespace dcmg {

std::string format_value(double v) {
    char buf[32];
    // %.17g round-trips but prints noise; try increasing precision until
    // the value parses back exactly.
    for (int prec = 9; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open output file: " + path);
    return out;
}

void write_preamble(std::ofstream& out, const std::string& config_json,
                    const RunResult* result) {
    out << "# dcmgsim v1\n";
    out << "# config: " << config_json << "\n";
    if (result && result->aborted)
        out << "# aborted: " << result->abort_reason << " at t=" << format_value(result->abort_time)
            << " (partial output)\n";
}

const char* kind_name(EventKind k) { return k == EventKind::sag ? "sag" : "step"; }

void write_metrics_row(std::ofstream& out, const MetricsRow& row) {
    out << format_value(row.event.time) << ',' << kind_name(row.event.kind) << ','
        << format_value(row.metrics.reference) << ',' << format_value(row.metrics.overshoot_pct)
        << ',' << format_value(row.metrics.undershoot_pct) << ','
        << format_value(row.metrics.settling_time) << ',' << (row.metrics.settled ? 1 : 0) << ','
        << format_value(row.metrics.steady_state_error_pct) << ','
        << format_value(row.metrics.peak_v) << ',' << format_value(row.metrics.trough_v) << ','
        << format_value(row.peak_abs_dvdt) << '\n';
}

}  // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const std::string& config_json, const RunResult& result) {
    auto out = open_out(path);
    write_preamble(out, config_json, &result);
    out << kTimeSeriesHeader << '\n';
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << format_value(ts.time[i]) << ',' << format_value(ts.v_dc[i]) << ','
            << format_value(ts.i_l[i]) << ',' << format_value(ts.mu_commanded[i]) << ','
            << format_value(ts.mu_applied[i]) << ',' << format_value(ts.v_ref[i]) << ','
            << format_value(ts.v_in[i]) << ',' << format_value(ts.e1[i]) << ','
            << format_value(ts.e2[i]) << ',' << format_value(ts.sigma_s[i]) << ','
            << format_value(ts.theta2[i]) << '\n';
    }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows,
                       const std::string& config_json, const RunResult& result) {
    auto out = open_out(path);
    write_preamble(out, config_json, &result);
    out << kMetricsHeader << '\n';
    for (const auto& row : rows) write_metrics_row(out, row);
}

void write_compare_csv(const std::string& path, const std::vector<MetricsRow>& baseline,
                       const std::vector<MetricsRow>& proposed,
                       const std::string& config_json) {
    auto out = open_out(path);
    write_preamble(out, config_json, nullptr);
    out << "event_time,event_kind,metric,esmc,gitsmbc,reduction_pct\n";
    const std::size_t n = std::min(baseline.size(), proposed.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = baseline[i];
        const auto& b = proposed[i];
        const MetricReduction red = compare_report(a.metrics, b.metrics);
        auto row = [&](const char* name, double va, double vb, std::optional<double> r) {
            out << format_value(a.event.time) << ',' << kind_name(a.event.kind) << ',' << name
                << ',' << format_value(va) << ',' << format_value(vb) << ','
                << (r ? format_value(*r) : "undefined") << '\n';
        };
        row("overshoot_pct", a.metrics.overshoot_pct, b.metrics.overshoot_pct, red.overshoot_pct);
        row("undershoot_pct", a.metrics.undershoot_pct, b.metrics.undershoot_pct,
            red.undershoot_pct);
        row("settling_time_s", a.metrics.settling_time, b.metrics.settling_time,
            red.settling_time);
        row("steady_state_error_pct", a.metrics.steady_state_error_pct,
            b.metrics.steady_state_error_pct, red.steady_state_error_pct);
    }
}

void write_sweep_csv(const std::string& path, const std::string& parameter,
                     const std::vector<std::pair<double, std::vector<MetricsRow>>>& rows,
                     const std::string& config_json) {
    auto out = open_out(path);
    write_preamble(out, config_json, nullptr);
    out << "parameter,value," << kMetricsHeader << '\n';
    for (const auto& [value, metrics] : rows) {
        for (const auto& row : metrics) {
            out << parameter << ',' << format_value(value) << ',';
            write_metrics_row(out, row);
        }
    }
}

void write_voltage_svg(const std::string& path, const TimeSeries& ts) {
    if (ts.size() < 2) throw InvalidInput("write_voltage_svg: series too short");
    const double width = 960.0, height = 480.0, margin = 56.0;
    const double t0 = ts.time.front(), t1 = ts.time.back();
    double v0 = ts.v_dc.front(), v1 = v0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        v0 = std::min({v0, ts.v_dc[i], ts.v_ref[i]});
        v1 = std::max({v1, ts.v_dc[i], ts.v_ref[i]});
    }
    const double pad = std::max(1.0, 0.05 * (v1 - v0));
    v0 -= pad;
    v1 += pad;

    auto sx = [&](double t) { return margin + (t - t0) / (t1 - t0) * (width - 2 * margin); };
    auto sy = [&](double v) { return height - margin - (v - v0) / (v1 - v0) * (height - 2 * margin); };

    auto polyline = [&](const std::vector<double>& ys, const char* color, const char* dash) {
        std::ostringstream p;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            p << (i ? " " : "") << sx(ts.time[i]) << ',' << sy(ys[i]);
        }
        std::ostringstream tag;
        tag << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (dash) tag << " stroke-dasharray=\"" << dash << "\"";
        tag << " points=\"" << p.str() << "\"/>\n";
        return tag.str();
    };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tv = t0 + (t1 - t0) * i / 5.0;
        const double vv = v0 + (v1 - v0) * i / 5.0;
        out << "<text x=\"" << sx(tv) << "\" y=\"" << height - margin + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << format_value(tv) << "</text>\n";
        out << "<text x=\"" << margin - 8 << "\" y=\"" << sy(vv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << format_value(vv) << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">time [s]</text>\n";
    out << "<text x=\"16\" y=\"" << height / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << height / 2
        << ")\">V_dc [V]</text>\n";
    out << polyline(ts.v_ref, "#888888", "6,4");
    out << polyline(ts.v_dc, "#1f77b4", nullptr);
    out << "</svg>\n";
}

}  // namespace dcmg
