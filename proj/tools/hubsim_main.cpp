// hubsim command-line front end.
//
//   hubsim run    [--config F] [--set K=V]... [--seed N] [--out DIR]
//   hubsim suite  ... runs study cases S1-S7 and writes the peak report
//   hubsim year   --design initial|design1|design2|custom ...
//   hubsim sweep  --factors 1.0,1.6,1.8,2.0 ...
//
// Exit codes: 0 success, 2 configuration error, 3 runtime invariant
// violation (power-balance check failed).

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hubsim/app.hpp"

namespace {

using namespace hubsim;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string seed;
    std::string out_dir;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (flat key = value lines)");
    cmd->add_option("--set", opts.overrides, "override a config key, KEY=VALUE; repeatable");
    cmd->add_option("--seed", opts.seed, "override scenario.seed");
    cmd->add_option("--out", opts.out_dir, "override output.dir");
    cmd->add_option("--jobs", opts.jobs, "parallel scenario jobs")->check(CLI::PositiveNumber);
}

config::Config load_config(const CommonOpts& opts) {
    config::Config cfg = opts.config_path.empty() ? config::Config{}
                                                  : config::Config::from_file(opts.config_path);
    for (const auto& kv : opts.overrides) cfg.apply_override(kv);
    if (!opts.seed.empty()) cfg.set("scenario.seed", opts.seed);
    if (!opts.out_dir.empty()) cfg.set("output.dir", opts.out_dir);
    return cfg;
}

int cmd_run(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    engine::Scenario sc = app::scenario_from(cfg);
    const auto marker = app::parse_event(cfg.raw("scenario.event"), sc.events);

    engine::RunResult result;
    if (marker) {
        const auto cr = engine::run_contingency(sc, marker->first, marker->second);
        std::cout << "event injected at t = " << csv::fmt(cr.event_time_s) << " s\n";
        result = cr.contingency;
    } else {
        result = engine::run(sc);
    }

    const std::string dir = cfg.raw("output.dir") + "/" + sc.name;
    app::write_run_outputs(dir, cfg, result);
    if (cfg.get_bool("output.wind_csv")) wind::write_field_csv(sc.field, dir + "/wind_field.csv");
    std::cout << "wrote " << dir << "/trace.csv (" << result.trace.size() << " steps)\n";
    std::cout << "peak charge " << csv::fmt(result.kpis.bess_max_charge_mw) << " MW, peak discharge "
              << csv::fmt(result.kpis.bess_max_discharge_mw) << " MW\n";
    return 0;
}

int cmd_suite(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto suite = app::run_suite(cfg, opts.jobs);
    const std::string out = cfg.raw("output.dir");
    app::ensure_dir(out);
    for (const auto& b : suite.baselines)
        app::write_run_outputs(out + "/" + b.name, cfg, b);
    for (const auto& c : suite.contingencies)
        app::write_run_outputs(out + "/" + c.contingency.name, cfg, c.contingency);
    const std::string report = app::suite_report_text(suite);
    app::write_text(out + "/suite_report.csv", report);
    std::cout << report;
    return 0;
}

int cmd_year(const CommonOpts& opts, const std::string& design) {
    const auto cfg = load_config(opts);
    const auto result = app::run_year_design(cfg, design);
    const std::string dir = cfg.raw("output.dir") + "/year_" + design;
    app::ensure_dir(dir);
    app::write_text(dir + "/summary.txt", app::summary_text(cfg, result));
    app::write_kpis_csv(dir + "/kpis.csv", {{design, result.kpis}});
    {
        // SOC and net-hydrogen series, the long-term storage picture
        std::ostringstream os;
        os << "t_s,soc,h2_level_kg\n";
        for (const auto& r : result.trace)
            os << csv::fmt(r.t_s) << ',' << csv::fmt(r.soc) << ',' << csv::fmt(r.h2_level_kg) << "\n";
        app::write_text(dir + "/soc_h2.csv", os.str());
    }
    std::cout << "design " << design << ": wind " << csv::fmt(result.design.wind_rating_mw())
              << " MW, ely " << csv::fmt(result.design.ely_rating_mw()) << " MW, fc "
              << csv::fmt(result.design.fc_rating_mw()) << " MW, bess "
              << csv::fmt(result.design.bess.power_rating_mw) << " MW/"
              << csv::fmt(result.design.bess.energy_capacity_mwh) << " MWh\n";
    for (const auto& [k, v] : metrics::kpi_items(result.kpis))
        std::cout << k << " = " << csv::fmt(v) << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& factors_text) {
    const auto cfg = load_config(opts);
    std::vector<double> factors;
    for (const auto& cell : csv::split(factors_text))
        factors.push_back(csv::parse_double(cell, "--factors"));
    const auto sweep = app::run_sweep(cfg, factors, opts.jobs);
    const std::string out = cfg.raw("output.dir");
    app::ensure_dir(out);
    app::write_text(out + "/sweep_report.csv", app::sweep_report_text(sweep));
    std::vector<std::pair<std::string, metrics::KpiReport>> rows;
    for (const auto& p : sweep.points) rows.emplace_back("factor_" + csv::fmt(p.factor), p.kpis);
    app::write_kpis_csv(out + "/sweep_kpis.csv", rows);
    std::cout << app::sweep_report_text(sweep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"islanded offshore energy hub simulator"};
    cli.require_subcommand(1);

    CommonOpts opts;
    std::string design = "initial";
    std::string factors = "1.0,1.6,1.8,2.0";

    auto* run = cli.add_subcommand("run", "run one scenario and write its trace");
    add_common(run, opts);
    auto* suite = cli.add_subcommand("suite", "run short-term study cases S1-S7");
    add_common(suite, opts);
    auto* year = cli.add_subcommand("year", "run one design over a full year");
    add_common(year, opts);
    year->add_option("--design", design, "initial | design1 | design2 | custom");
    auto* sweep = cli.add_subcommand("sweep", "electrolyzer/wind upscaling sweep");
    add_common(sweep, opts);
    sweep->add_option("--factors", factors, "comma-separated upscaling factors");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(opts);
        if (suite->parsed()) return cmd_suite(opts);
        if (year->parsed()) return cmd_year(opts, design);
        if (sweep->parsed()) return cmd_sweep(opts, factors);
    } catch (const hubsim::BalanceError& e) {
        std::cerr << "runtime invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
