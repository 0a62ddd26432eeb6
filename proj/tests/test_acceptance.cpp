// Acceptance suite: one test case per criterion, each printing a
// PASS/FAIL line with the measured numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "dcmg/config.hpp"
#include "dcmg/metrics.hpp"
#include "dcmg/runner.hpp"

using namespace dcmg;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[acceptance] criterion %d (%s): %s — %s\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

RunConfig base_config() {
    RunConfig cfg;  // library defaults = Table-I plant + published gains
    cfg.output_dir = (std::filesystem::temp_directory_path() / "dcmgsim_acceptance").string();
    return cfg;
}

RunArtifacts run_with(const std::string& scenario, const std::string& controller,
                      double* walltime = nullptr) {
    RunConfig cfg = base_config();
    cfg.scenario = scenario;
    cfg.controller = controller;
    Timer timer;
    auto artifacts = execute_run(cfg);
    if (walltime) *walltime = timer.seconds();
    return artifacts;
}

bool strictly_better(const TransientMetrics& proposed, const TransientMetrics& baseline) {
    return proposed.overshoot_pct < baseline.overshoot_pct &&
           proposed.undershoot_pct < baseline.undershoot_pct &&
           proposed.settling_time < baseline.settling_time;
}

}  // namespace

TEST_CASE("criterion 1: scenario 1 qualitative ordering") {
    double t_esmc = 0.0, t_gitsmbc = 0.0;
    auto esmc = run_with("scenario1", "esmc", &t_esmc);
    auto gitsmbc = run_with("scenario1", "gitsmbc", &t_gitsmbc);

    REQUIRE_FALSE(esmc.result.aborted);
    REQUIRE_FALSE(gitsmbc.result.aborted);
    REQUIRE(esmc.metrics.size() == 2);
    REQUIRE(gitsmbc.metrics.size() == 2);

    const bool ordering = strictly_better(gitsmbc.metrics[0].metrics, esmc.metrics[0].metrics) &&
                          strictly_better(gitsmbc.metrics[1].metrics, esmc.metrics[1].metrics);
    const bool runtime_ok = t_esmc < 60.0 && t_gitsmbc < 60.0;

    std::ostringstream detail;
    detail << "t=0: GITSMBC OS/US/ST = " << fmt(gitsmbc.metrics[0].metrics.overshoot_pct) << "%/"
           << fmt(gitsmbc.metrics[0].metrics.undershoot_pct) << "%/"
           << fmt(gitsmbc.metrics[0].metrics.settling_time * 1e3) << "ms vs ESMC "
           << fmt(esmc.metrics[0].metrics.overshoot_pct) << "%/"
           << fmt(esmc.metrics[0].metrics.undershoot_pct) << "%/"
           << fmt(esmc.metrics[0].metrics.settling_time * 1e3) << "ms; t=0.54: "
           << fmt(gitsmbc.metrics[1].metrics.overshoot_pct) << "%/"
           << fmt(gitsmbc.metrics[1].metrics.undershoot_pct) << "%/"
           << fmt(gitsmbc.metrics[1].metrics.settling_time * 1e3) << "ms vs "
           << fmt(esmc.metrics[1].metrics.overshoot_pct) << "%/"
           << fmt(esmc.metrics[1].metrics.undershoot_pct) << "%/"
           << fmt(esmc.metrics[1].metrics.settling_time * 1e3) << "ms; runtimes "
           << fmt(t_esmc) << "s, " << fmt(t_gitsmbc) << "s";
    report(1, "scenario 1 ordering", ordering && runtime_ok, detail.str());
    CHECK(ordering);
    CHECK(runtime_ok);
}

TEST_CASE("criterion 2: scenario 1 loose quantitative band at t=0") {
    auto gitsmbc = run_with("scenario1", "gitsmbc");
    REQUIRE_FALSE(gitsmbc.result.aborted);
    const auto& m = gitsmbc.metrics[0].metrics;

    const bool os_ok = std::abs(m.overshoot_pct - 14.0) <= 7.0;
    const bool us_ok = std::abs(m.undershoot_pct - 4.0) <= 2.0;
    const bool st_ok = std::abs(m.settling_time - 20e-3) <= 10e-3;

    std::ostringstream detail;
    detail << "OS " << fmt(m.overshoot_pct) << "% (target 14±7), US " << fmt(m.undershoot_pct)
           << "% (target 4±2), ST " << fmt(m.settling_time * 1e3) << "ms (target 20±10)";
    report(2, "scenario 1 quantitative band", os_ok && us_ok && st_ok, detail.str());
    CHECK(os_ok);
    CHECK(us_ok);
    CHECK(st_ok);
}

TEST_CASE("criterion 3: scenario 2 stability under delay") {
    auto esmc = run_with("scenario2", "esmc");
    auto gitsmbc = run_with("scenario2", "gitsmbc");
    REQUIRE_FALSE(esmc.result.aborted);
    REQUIRE_FALSE(gitsmbc.result.aborted);
    REQUIRE(gitsmbc.metrics.size() == 3);

    // bound check after the start-up transient (the run starts at v_in)
    double vmin = 1e300, vmax = -1e300;
    const auto& ts = gitsmbc.result.series;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts.time[i] < 0.1) continue;
        vmin = std::min(vmin, ts.v_dc[i]);
        vmax = std::max(vmax, ts.v_dc[i]);
    }
    const bool bounded = vmin >= 60.0 && vmax <= 130.0;
    const bool resettles = gitsmbc.metrics[1].metrics.settled && gitsmbc.metrics[2].metrics.settled;
    bool beats = true;
    for (std::size_t i = 0; i < 3; ++i) {
        beats = beats &&
                gitsmbc.metrics[i].metrics.overshoot_pct < esmc.metrics[i].metrics.overshoot_pct &&
                gitsmbc.metrics[i].metrics.undershoot_pct < esmc.metrics[i].metrics.undershoot_pct;
    }

    std::ostringstream detail;
    detail << "v_dc in [" << fmt(vmin) << ", " << fmt(vmax) << "] (bound [60,130]), resettles="
           << (resettles ? "yes" : "no") << ", beats baseline OS/US at all events="
           << (beats ? "yes" : "no");
    report(3, "scenario 2 delay robustness", bounded && resettles && beats, detail.str());
    CHECK(bounded);
    CHECK(resettles);
    CHECK(beats);
}

TEST_CASE("criterion 4: finite-time convergence oracle") {
    GitsmbcGains gains;
    gains.beta2 = 0.0;
    gains.beta3 = 5.0;
    gains.chi = 0.6;
    gains.boundary_layer = 0.0;

    Timer timer;
    const double dt = 1e-5;
    double sigma = 1.0;
    double t = 0.0;
    while (std::abs(sigma) >= 1e-6 && t < 1.0) {
        sigma += ifprl_rate(sigma, gains) * dt;
        t += dt;
    }
    const double runtime = timer.seconds();
    const double expected = analytic_convergence_time(1.0, gains.beta3, gains.chi);
    const bool time_ok = std::abs(t - expected) / expected <= 0.02;
    const bool fast = runtime < 1.0;

    std::ostringstream detail;
    detail << "reached |sigma|<1e-6 at t=" << fmt(t) << "s (analytic " << fmt(expected)
           << "s), runtime " << fmt(runtime) << "s";
    report(4, "finite-time convergence", time_ok && fast, detail.str());
    CHECK(time_ok);
    CHECK(fast);
}

TEST_CASE("criterion 5: linearization consistency along scenario 1") {
    RunConfig cfg = base_config();
    cfg.sim.record_decimation = 1;  // full-rate records for the difference checks
    cfg.scenario = "scenario1";
    cfg.controller = "gitsmbc";
    auto artifacts = execute_run(cfg);
    REQUIRE_FALSE(artifacts.result.aborted);
    const auto& ts = artifacts.result.series;
    const double dt = cfg.sim.dt;

    // reconstruct zeta1/zeta2/a/b from the recorded state like the engine
    PlantParams p = cfg.plant;
    std::vector<double> zeta1(ts.size()), zeta2(ts.size()), drift(ts.size());
    double prev_dvdt = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i > 0) prev_dvdt = (ts.v_dc[i] - ts.v_dc[i - 1]) / dt;
        const double dpv = virtual_power(ts.v_dc[i], prev_dvdt, p.c_vir);
        const auto canon =
            to_canonical(PlantState{ts.i_l[i], ts.v_dc[i]}, p, ts.v_in[i], dpv);
        const auto coeffs =
            linearization_coeffs(PlantState{ts.i_l[i], ts.v_dc[i]}, p, ts.v_in[i], dpv);
        zeta1[i] = canon.zeta1;
        zeta2[i] = canon.zeta2;
        drift[i] = coeffs.a_x + coeffs.b_x * ts.mu_applied[i];
    }

    double scale1 = 0.0, scale2 = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        scale1 = std::max(scale1, std::abs(zeta2[i]));
        scale2 = std::max(scale2, std::abs(drift[i]));
    }
    const double floor1 = 1e-3 * scale1;
    const double floor2 = 1e-3 * scale2;

    auto excluded = [&](double t) {
        return (t >= 0.0 && t < 1e-3) || (t >= 0.54 && t < 0.541);
    };

    std::size_t total = 0, ok1 = 0, ok2 = 0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (excluded(ts.time[i]) || excluded(ts.time[i + 1])) continue;
        ++total;
        const double fd1 = (zeta1[i + 1] - zeta1[i]) / dt;
        if (std::abs(fd1 - zeta2[i]) / std::max(std::abs(zeta2[i]), floor1) < 1e-3) ++ok1;
        const double fd2 = (zeta2[i + 1] - zeta2[i]) / dt;
        if (std::abs(fd2 - drift[i]) / std::max(std::abs(drift[i]), floor2) < 1e-3) ++ok2;
    }
    const double frac1 = static_cast<double>(ok1) / total;
    const double frac2 = static_cast<double>(ok2) / total;
    const bool pass = frac1 >= 0.99 && frac2 >= 0.99;

    std::ostringstream detail;
    detail << "zeta1' ~ zeta2 on " << fmt(100.0 * frac1) << "% of samples, zeta2' ~ a+b*mu on "
           << fmt(100.0 * frac2) << "% (need >= 99%)";
    report(5, "linearization consistency", pass, detail.str());
    CHECK(frac1 >= 0.99);
    CHECK(frac2 >= 0.99);
}

TEST_CASE("criterion 6: Lyapunov monotonicity on nominal scenario 1") {
    auto gitsmbc = run_with("scenario1", "gitsmbc");
    REQUIRE_FALSE(gitsmbc.result.aborted);
    auto spec = scenario1();
    auto report_data = lyapunov_trace(gitsmbc.result.series, spec.events, 1e-3, 0.01);

    const bool pass = report_data.violations.empty();
    std::ostringstream detail;
    detail << report_data.violations.size() << " violation interval(s) beyond 1% of local peak";
    if (!report_data.violations.empty()) {
        detail << "; first at t=" << fmt(report_data.violations.front().t_start);
    }
    report(6, "Lyapunov monotonicity", pass, detail.str());
    CHECK(pass);
}

TEST_CASE("criterion 7: virtual-capacitor trend") {
    RunConfig cfg = base_config();
    cfg.scenario = "scenario1";
    cfg.controller = "gitsmbc";
    const double c_dc = cfg.plant.c_dc;
    auto sweep = execute_sweep(cfg, "c_vir", {0.0, c_dc, 2.0 * c_dc});
    REQUIRE(sweep.rows.size() == 3);
    for (const auto& result : sweep.results) REQUIRE_FALSE(result.aborted);

    // peak |dv/dt| after the 0.54 s step, full-rate tracking
    std::vector<double> peaks;
    for (const auto& [value, rows] : sweep.rows) {
        REQUIRE(rows.size() == 2);
        peaks.push_back(rows[1].peak_abs_dvdt);
    }
    const bool decreasing = peaks[0] > peaks[1] && peaks[1] > peaks[2];

    // open-loop halving property, exact
    PlantParams p;
    PlantState s{40.0, 80.0};
    auto base = plant_derivatives(s, 0.4, 50.0, p, 0.0);
    PlantParams doubled = p;
    doubled.c_vir = p.c_dc;
    auto halved = plant_derivatives(s, 0.4, 50.0, doubled, 0.0);
    const double factor = std::abs(base.dv_dc_dt) / std::abs(halved.dv_dc_dt);
    const bool exact = std::abs(factor - 2.0) <= 1e-9;

    std::ostringstream detail;
    detail << "post-step peak |dv/dt| = {" << fmt(peaks[0]) << ", " << fmt(peaks[1]) << ", "
           << fmt(peaks[2]) << "} V/s for c_vir = {0, 1, 2}*c_dc; open-loop factor "
           << fmt(factor);
    report(7, "virtual-capacitor trend", decreasing && exact, detail.str());
    CHECK(decreasing);
    CHECK(exact);
}

TEST_CASE("criterion 8: metrics oracle equivalence") {
    // randomized damped oscillations, checked sample-exact elsewhere in
    // the unit suite; repeated here as the acceptance gate
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> amp(2.0, 40.0);
    std::uniform_real_distribution<double> tau(0.003, 0.08);
    std::uniform_real_distribution<double> freq(10.0, 250.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        TimeSeries ts;
        const double a = amp(rng), tc = tau(rng), f = freq(rng), ph = phase(rng);
        for (int k = 0; k <= 300; ++k) {
            const double tk = k * 1e-3;
            ts.time.push_back(tk);
            ts.v_dc.push_back(100.0 +
                              a * std::exp(-tk / tc) * std::cos(2 * std::numbers::pi * f * tk + ph));
            ts.v_ref.push_back(100.0);
        }
        ts.i_l.assign(ts.time.size(), 0.0);
        ts.mu_commanded.assign(ts.time.size(), 0.0);
        ts.mu_applied.assign(ts.time.size(), 0.0);
        ts.v_in.assign(ts.time.size(), 50.0);
        ts.e1.assign(ts.time.size(), 0.0);
        ts.e2.assign(ts.time.size(), 0.0);
        ts.sigma_s.assign(ts.time.size(), 0.0);
        ts.theta2.assign(ts.time.size(), 0.0);

        const EventKind kind = trial % 2 ? EventKind::sag : EventKind::step;
        auto fast = transient_metrics(ts, 0.0, 0.3, 2.0, kind);

        // dense brute-force evaluation on the same grid
        const double ref = 100.0;
        double vmax = -1e300;
        for (double v : ts.v_dc) vmax = std::max(vmax, v);
        const double os = std::max(0.0, vmax - ref) / ref * 100.0;

        std::size_t start_from = ts.v_dc.size();
        if (kind == EventKind::sag) {
            start_from = 0;
        } else {
            const double side0 = ts.v_dc.front() - ref;
            for (std::size_t i = 0; i < ts.v_dc.size(); ++i) {
                const double side = ts.v_dc[i] - ref;
                if (side == 0.0 || side0 == 0.0 || (side > 0.0) != (side0 > 0.0)) {
                    start_from = i;
                    break;
                }
            }
        }
        double us = 0.0;
        if (start_from < ts.v_dc.size()) {
            double vmin = 1e300;
            for (std::size_t i = start_from; i < ts.v_dc.size(); ++i)
                vmin = std::min(vmin, ts.v_dc[i]);
            us = std::max(0.0, ref - vmin) / ref * 100.0;
        }

        std::ptrdiff_t last_out = -1;
        for (std::size_t i = 0; i < ts.v_dc.size(); ++i)
            if (std::abs(ts.v_dc[i] - ref) > 2.0) last_out = static_cast<std::ptrdiff_t>(i);
        double st;
        if (last_out < 0)
            st = 0.0;
        else if (static_cast<std::size_t>(last_out) == ts.v_dc.size() - 1)
            st = 0.3;
        else
            st = ts.time[static_cast<std::size_t>(last_out) + 1];

        if (fast.overshoot_pct != os || fast.undershoot_pct != us || fast.settling_time != st)
            ++mismatches;
    }
    const bool pass = mismatches == 0;
    report(8, "metrics oracle equivalence", pass,
           std::to_string(mismatches) + " mismatching series out of 100");
    CHECK(mismatches == 0);
}

TEST_CASE("criterion 9: determinism of cmd_run outputs") {
    namespace fs = std::filesystem;
    auto dir_a = fs::temp_directory_path() / "dcmgsim_acc_det_a";
    auto dir_b = fs::temp_directory_path() / "dcmgsim_acc_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    RunConfig cfg = base_config();
    cfg.sim.duration = 0.2;

    std::ostringstream out, err;
    cfg.output_dir = dir_a.string();
    const std::string resolved_a = cfg.resolved_json();
    REQUIRE(cmd_run(cfg, out, err) == kExitOk);
    cfg.output_dir = dir_a.string();  // identical config, same directory target semantics
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string first_ts = slurp(dir_a / "scenario1_gitsmbc_timeseries.csv");
    const std::string first_metrics = slurp(dir_a / "scenario1_gitsmbc_metrics.csv");
    REQUIRE(cmd_run(cfg, out, err) == kExitOk);
    const std::string second_ts = slurp(dir_a / "scenario1_gitsmbc_timeseries.csv");
    const std::string second_metrics = slurp(dir_a / "scenario1_gitsmbc_metrics.csv");

    const bool pass = first_ts == second_ts && first_metrics == second_metrics &&
                      !first_ts.empty() && !first_metrics.empty();
    report(9, "byte-identical outputs", pass,
           pass ? "timeseries and metrics files identical across runs"
                : "outputs differ between identical runs");
    CHECK(pass);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
