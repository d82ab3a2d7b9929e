#pragma once

// High-level drivers behind the CLI subcommands: build scenarios from a
// config, run the S1-S7 short-term suite, the year-long design evaluations
// and the self-sufficiency sizing sweep, and write traces and reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hubsim/config.hpp"
#include "hubsim/engine.hpp"
#include "hubsim/metrics.hpp"

namespace hubsim::app {

inline wind::FarmLayout layout_from(const engine::DesignSpec& d) {
    return wind::two_row_layout(d.n_turbines, d.farm_spacing_d, d.turbine.rotor_diameter_m);
}

/// Short-term wind field for a design: synthesized from the config's
/// turbulence parameters (or imported from wind.field_csv), wakes applied
/// per config.
inline wind::WindField short_term_field(const config::Config& cfg, const engine::DesignSpec& d,
                                        double dt_s, double duration_s) {
    const auto layout = layout_from(d);
    layout.validate(d.turbine.rotor_diameter_m);
    wind::WindField field;
    if (!cfg.raw("wind.field_csv").empty()) {
        field = wind::read_field_csv(cfg.raw("wind.field_csv"));
        if (field.n_turbines != d.n_turbines)
            throw ConfigError("wind.field_csv: turbine count differs from the design");
    } else {
        field = wind::synthesize_wind_field(layout, config::turbulence_from(cfg), dt_s, duration_s);
    }
    return wind::apply_wake(field, layout, d.turbine, config::wake_from(cfg, false));
}

inline std::optional<std::pair<engine::EventSpec::Kind, engine::EventSpec::When>>
parse_event(const std::string& text, std::vector<engine::EventSpec>& fixed_events) {
    if (text == "none" || text.empty()) return std::nullopt;
    const auto at = text.find('@');
    if (at == std::string::npos) throw ConfigError("scenario.event: expected KIND@WHEN, got " + text);
    const std::string kind_s = text.substr(0, at);
    const std::string when_s = text.substr(at + 1);
    engine::EventSpec::Kind kind;
    if (kind_s == "wt_trip") {
        kind = engine::EventSpec::Kind::trip_wind_turbine;
    } else if (kind_s == "load_trip") {
        kind = engine::EventSpec::Kind::trip_load;
    } else {
        throw ConfigError("scenario.event: unknown kind " + kind_s);
    }
    if (when_s == "worst_discharge")
        return std::make_pair(kind, engine::EventSpec::When::worst_discharge);
    if (when_s == "worst_charge") return std::make_pair(kind, engine::EventSpec::When::worst_charge);
    fixed_events.push_back({kind, engine::EventSpec::When::at_time,
                            csv::parse_double(when_s, "scenario.event time"), -1});
    return std::nullopt;
}

/// One short-term scenario straight from the effective config.
inline engine::Scenario scenario_from(const config::Config& cfg) {
    engine::Scenario sc;
    sc.name = cfg.raw("scenario.name");
    sc.design = config::design_from(cfg);
    sc.dt_s = cfg.get_double("scenario.dt_s");
    sc.duration_s = cfg.get_double("scenario.duration_s");
    sc.control = config::control_from(cfg);
    sc.seed = cfg.get_seed("scenario.seed");
    sc.bess_sizing_mode = cfg.get_bool("scenario.sizing_mode");
    sc.field = short_term_field(cfg, sc.design, sc.dt_s, sc.duration_s);
    return sc;
}

/// Hourly mean-wind year: user CSV when configured, else the bundled
/// synthetic Weibull year (scale calibrated for a 0.51 farm capacity factor).
inline std::vector<double> annual_means_from(const config::Config& cfg) {
    if (!cfg.raw("wind.annual_csv").empty()) return wind::read_annual_csv(cfg.raw("wind.annual_csv"));
    wind::WeibullYearSpec w;
    w.shape = cfg.get_double("wind.weibull_shape");
    w.scale_mps = cfg.get_double("wind.weibull_scale_mps");
    w.corr_time_h = cfg.get_double("wind.ar1_corr_time_h");
    w.seed = cfg.get_seed("scenario.seed");
    return wind::weibull_year(w);
}

inline engine::AnnualWindSpec annual_wind_from(const config::Config& cfg) {
    engine::AnnualWindSpec aws;
    aws.hourly_mean_mps = annual_means_from(cfg);
    aws.turbulence = config::turbulence_from(cfg);
    aws.turbulence.ntm_iref = cfg.get_double("wind.annual_ntm_iref");
    aws.turbulence.ntm_sigma_cap_mps = cfg.get_double("wind.annual_sigma_cap_mps");
    aws.wake = config::wake_from(cfg, true);
    aws.wake_enabled = aws.wake.enabled;
    return aws;
}

/// Design presets for the year runs: the initial system and the two
/// fuel-cell downsizing variants (design2 pairs the smaller plant with a
/// 300 MWh battery).
inline engine::DesignSpec year_design(const config::Config& cfg, const std::string& name) {
    engine::DesignSpec d = config::design_from(cfg);
    if (name == "initial" || name == "custom") return d;
    if (name == "design1") {
        d.n_fc_blocks = 6;
        return d;
    }
    if (name == "design2") {
        d.n_fc_blocks = 5;
        d.bess.energy_capacity_mwh = 300.0;
        return d;
    }
    throw ConfigError("unknown design name: " + name + " (initial | design1 | design2 | custom)");
}

// ---------------------------------------------------------------------------
// short-term suite (study cases S1-S7)

struct SuiteRow {
    std::string case_name;
    double max_charge_mw = 0.0;
    double max_discharge_mw = 0.0;
    double max_abs_freq_dev_hz = 0.0;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;                 // S1..S7
    std::vector<engine::RunResult> baselines;   // S1, S2, S3
    std::vector<engine::ContingencyResult> contingencies;  // S4..S7
};

inline SuiteRow row_from(const std::string& name, const engine::RunResult& r) {
    return {name, r.kpis.bess_max_charge_mw, r.kpis.bess_max_discharge_mw,
            r.kpis.freq_max_abs_dev_hz};
}

/// Run the seven short-term study cases: S1 slow/sequence, S2
/// slow/synchronized, S3 fast/sequence, then the four N-1 variants (turbine
/// trip at the worst discharge instant for S4/S5, biggest-load trip at the
/// worst charge instant for S6/S7). All share one wind realization.
inline SuiteResult run_suite(const config::Config& cfg, int jobs = 1) {
    engine::Scenario base = scenario_from(cfg);
    base.events.clear();

    auto variant = [&](const std::string& name, double ramp_s, pms::Allocation alloc) {
        engine::Scenario sc = base;
        sc.name = name;
        sc.design.ely_ramp_time_s = ramp_s;
        sc.control.ely_allocation = alloc;
        return sc;
    };
    const double slow = 706.0, fast = 11.0;
    const engine::Scenario s1 = variant("s1", slow, pms::Allocation::sequence);
    const engine::Scenario s2 = variant("s2", slow, pms::Allocation::synchronized);
    const engine::Scenario s3 = variant("s3", fast, pms::Allocation::sequence);

    SuiteResult out;
    const bool parallel = jobs > 1;
    if (parallel) {
        auto f1 = std::async(std::launch::async, [&] { return engine::run(s1); });
        auto f2 = std::async(std::launch::async, [&] { return engine::run(s2); });
        auto f3 = std::async(std::launch::async, [&] { return engine::run(s3); });
        out.baselines = {f1.get(), f2.get(), f3.get()};
    } else {
        out.baselines = {engine::run(s1), engine::run(s2), engine::run(s3)};
    }

    // contingencies reuse the matching baseline rather than re-running it
    auto contingency = [&](const engine::Scenario& sc, const engine::RunResult& baseline,
                           engine::EventSpec::Kind kind, engine::EventSpec::When dir,
                           const std::string& name) {
        engine::ContingencyResult cr;
        cr.baseline = baseline;
        cr.event_time_s = engine::find_worst_instant(baseline, dir);
        engine::Scenario ev = sc;
        ev.name = name;
        ev.events.push_back({kind, engine::EventSpec::When::at_time, cr.event_time_s, -1});
        cr.contingency = engine::run(ev);
        return cr;
    };
    using K = engine::EventSpec::Kind;
    using W = engine::EventSpec::When;
    if (parallel) {
        auto f4 = std::async(std::launch::async,
                             [&] { return contingency(s1, out.baselines[0], K::trip_wind_turbine, W::worst_discharge, "s4"); });
        auto f5 = std::async(std::launch::async,
                             [&] { return contingency(s3, out.baselines[2], K::trip_wind_turbine, W::worst_discharge, "s5"); });
        auto f6 = std::async(std::launch::async,
                             [&] { return contingency(s1, out.baselines[0], K::trip_load, W::worst_charge, "s6"); });
        auto f7 = std::async(std::launch::async,
                             [&] { return contingency(s3, out.baselines[2], K::trip_load, W::worst_charge, "s7"); });
        out.contingencies = {f4.get(), f5.get(), f6.get(), f7.get()};
    } else {
        out.contingencies = {
            contingency(s1, out.baselines[0], K::trip_wind_turbine, W::worst_discharge, "s4"),
            contingency(s3, out.baselines[2], K::trip_wind_turbine, W::worst_discharge, "s5"),
            contingency(s1, out.baselines[0], K::trip_load, W::worst_charge, "s6"),
            contingency(s3, out.baselines[2], K::trip_load, W::worst_charge, "s7"),
        };
    }

    out.rows = {row_from("S1", out.baselines[0]), row_from("S2", out.baselines[1]),
                row_from("S3", out.baselines[2]), row_from("S4", out.contingencies[0].contingency),
                row_from("S5", out.contingencies[1].contingency),
                row_from("S6", out.contingencies[2].contingency),
                row_from("S7", out.contingencies[3].contingency)};
    return out;
}

// ---------------------------------------------------------------------------
// year runs and the sizing sweep

inline engine::RunResult run_year_design(const config::Config& cfg, const std::string& design_name) {
    const auto design = year_design(cfg, design_name);
    const auto aws = annual_wind_from(cfg);
    return engine::run_year(design, aws, cfg.get_double("scenario.annual_dt_s"),
                            config::control_from(cfg), cfg.get_seed("scenario.seed"), design_name);
}

struct SweepPoint {
    double factor = 1.0;
    double wind_mw = 0.0;
    double ely_mw = 0.0;
    double net_h2_kg = 0.0;
    metrics::KpiReport kpis;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double neutrality_factor = 0.0;  // linear-interpolated net-H2 zero crossing
    bool neutral_reached = false;
};

/// Upscaled variant for one sweep factor: the electrolyzer plant scales by
/// f (train ratings and production together), the wind farm is resized to
/// match its peak demand — platform load plus the scaled plant — in whole
/// turbines.
inline engine::DesignSpec sweep_design(const engine::DesignSpec& base, double factor) {
    engine::DesignSpec d = base;
    d.ely_train_mw = base.ely_train_mw * factor;
    d.ely_nominal_nm3ph = base.ely_nominal_nm3ph * factor;
    const double wind_match = d.load_total_mw() + factor * base.ely_rating_mw();
    const double n_wt = std::max(1.0, std::round(wind_match / d.turbine.rated_power_mw));
    d.n_turbines = static_cast<std::size_t>(n_wt);
    return d;
}

/// Upscale the electrolyzer plant by each factor and resize the wind farm to
/// match its peak demand; report net hydrogen per factor.
inline SweepResult run_sweep(const config::Config& cfg, const std::vector<double>& factors,
                             int jobs = 1) {
    if (factors.empty()) throw ConfigError("sweep: need at least one factor");
    for (double f : factors)
        if (!(f >= 1.0)) throw ConfigError("sweep: factors must be >= 1");

    const engine::DesignSpec base = year_design(cfg, "design1");
    const auto control = config::control_from(cfg);
    const double dt = cfg.get_double("scenario.annual_dt_s");
    const auto seed = cfg.get_seed("scenario.seed");

    auto run_factor = [&](double f) {
        const engine::DesignSpec d = sweep_design(base, f);
        engine::AnnualWindSpec aws = annual_wind_from(cfg);
        const auto year =
            engine::run_year(d, aws, dt, control, seed, "sweep_" + csv::fmt(f));
        SweepPoint pt;
        pt.factor = f;
        pt.wind_mw = d.wind_rating_mw();
        pt.ely_mw = d.ely_rating_mw();
        pt.net_h2_kg = year.kpis.h2_net_kg;
        pt.kpis = year.kpis;
        return pt;
    };

    SweepResult out;
    if (jobs > 1) {
        std::vector<std::future<SweepPoint>> futs;
        futs.reserve(factors.size());
        for (double f : factors) futs.push_back(std::async(std::launch::async, run_factor, f));
        for (auto& fu : futs) out.points.push_back(fu.get());
    } else {
        for (double f : factors) out.points.push_back(run_factor(f));
    }

    for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
        const auto& a = out.points[i];
        const auto& b = out.points[i + 1];
        if (a.net_h2_kg < 0.0 && b.net_h2_kg >= 0.0) {
            out.neutrality_factor =
                a.factor + (b.factor - a.factor) * (-a.net_h2_kg) / (b.net_h2_kg - a.net_h2_kg);
            out.neutral_reached = true;
            break;
        }
    }
    if (!out.neutral_reached && !out.points.empty() && out.points.front().net_h2_kg >= 0.0) {
        out.neutrality_factor = out.points.front().factor;
        out.neutral_reached = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// output writing

inline void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write file: " + path);
    os << text;
}

inline std::string summary_text(const config::Config& cfg, const engine::RunResult& r) {
    std::ostringstream os;
    os << "# effective config\n" << cfg.echo();
    os << "# kpis\n";
    os << "run.name = " << r.name << "\n";
    os << "run.seed = " << r.seed << "\n";
    os << "run.steps = " << r.trace.size() << "\n";
    os << "design.wind_rating_mw = " << csv::fmt(r.design.wind_rating_mw()) << "\n";
    os << "design.ely_rating_mw = " << csv::fmt(r.design.ely_rating_mw()) << "\n";
    os << "design.fc_rating_mw = " << csv::fmt(r.design.fc_rating_mw()) << "\n";
    os << "design.bess_power_mw = " << csv::fmt(r.design.bess.power_rating_mw) << "\n";
    os << "design.bess_energy_mwh = " << csv::fmt(r.design.bess.energy_capacity_mwh) << "\n";
    for (const auto& [k, v] : metrics::kpi_items(r.kpis)) os << "kpi." << k << " = " << csv::fmt(v) << "\n";
    return os.str();
}

inline void write_kpis_csv(const std::string& path,
                           const std::vector<std::pair<std::string, metrics::KpiReport>>& rows) {
    std::ostringstream os;
    os << "design";
    for (const auto& [k, v] : metrics::kpi_items(rows.front().second)) {
        (void)v;
        os << ',' << k;
    }
    os << "\n";
    for (const auto& [name, rep] : rows) {
        os << name;
        for (const auto& [k, v] : metrics::kpi_items(rep)) {
            (void)k;
            os << ',' << csv::fmt(v);
        }
        os << "\n";
    }
    write_text(path, os.str());
}

/// Standard per-run output bundle: trace.csv, summary.txt, kpis.csv.
inline void write_run_outputs(const std::string& out_dir, const config::Config& cfg,
                              const engine::RunResult& r) {
    ensure_dir(out_dir);
    write_trace_csv(r.trace, out_dir + "/trace.csv");
    write_text(out_dir + "/summary.txt", summary_text(cfg, r));
    write_kpis_csv(out_dir + "/kpis.csv", {{r.name, r.kpis}});
}

inline std::string suite_report_text(const SuiteResult& s) {
    std::ostringstream os;
    os << "case,max_charge_mw,max_discharge_mw,max_abs_freq_dev_hz\n";
    for (const auto& row : s.rows)
        os << row.case_name << ',' << csv::fmt(row.max_charge_mw) << ','
           << csv::fmt(row.max_discharge_mw) << ',' << csv::fmt(row.max_abs_freq_dev_hz) << "\n";
    for (std::size_t i = 0; i < s.contingencies.size(); ++i)
        os << "# s" << (i + 4) << " event at t = " << csv::fmt(s.contingencies[i].event_time_s)
           << " s\n";
    return os.str();
}

inline std::string sweep_report_text(const SweepResult& s) {
    std::ostringstream os;
    os << "factor,wind_mw,ely_mw,net_h2_kg\n";
    for (const auto& p : s.points)
        os << csv::fmt(p.factor) << ',' << csv::fmt(p.wind_mw) << ',' << csv::fmt(p.ely_mw) << ','
           << csv::fmt(p.net_h2_kg) << "\n";
    if (s.neutral_reached)
        os << "# hydrogen neutrality factor = " << csv::fmt(s.neutrality_factor) << "\n";
    else
        os << "# hydrogen neutrality not reached within the swept factors\n";
    return os.str();
}

} // namespace hubsim::app
