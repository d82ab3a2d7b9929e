#include <catch2/catch.hpp>

#include <cstdio>
#include <fstream>

#include "hubsim/app.hpp"
#include "hubsim/config.hpp"

using namespace hubsim;
using namespace hubsim::config;

TEST_CASE("defaults reproduce the initial design") {
    Config cfg;
    const auto d = design_from(cfg);
    CHECK(d.wind_rating_mw() == Approx(64.0));
    CHECK(d.ely_rating_mw() == Approx(35.0));
    CHECK(d.fc_rating_mw() == Approx(35.0));
    CHECK(d.bess.power_rating_mw == Approx(10.0));
    CHECK(d.bess.energy_capacity_mwh == Approx(10.0));
    CHECK(d.load_total_mw() == Approx(27.5));
    CHECK(d.platforms.size() == 6);
    CHECK(d.turbine.cut_in_mps == Approx(4.0));
    CHECK(d.turbine.cut_out_mps == Approx(25.0));
    CHECK(d.tank_capacity_kg < 0.0);  // unbounded net tracking

    const auto cc = control_from(cfg);
    CHECK(cc.soc_target == Approx(0.5));
    CHECK(cc.freq_droop_pu == Approx(0.04));
    CHECK(cc.ely_allocation == pms::Allocation::sequence);
}

TEST_CASE("echo round-trips to an identical configuration") {
    Config cfg;
    cfg.set("design.bess_mw", "30");
    cfg.set("control.ely_allocation", "synchronized");
    const Config back = Config::from_text(cfg.echo());
    CHECK(back == cfg);
    CHECK(back.get_double("design.bess_mw") == Approx(30.0));
}

TEST_CASE("unknown keys and malformed lines are rejected") {
    Config cfg;
    CHECK_THROWS_AS(cfg.set("design.bogus", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.apply_override("no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(Config::from_text("design.bess_mw : 10\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_text("nonsense.key = 1\n"), ConfigError);
    CHECK_NOTHROW(Config::from_text("# comment only\n\ndesign.bess_mw = 12 # inline\n"));
}

TEST_CASE("type validation on access") {
    Config cfg;
    cfg.set("design.n_ely_trains", "3.7");
    CHECK_THROWS_AS(cfg.get_int("design.n_ely_trains"), ConfigError);
    cfg.set("scenario.sizing_mode", "maybe");
    CHECK_THROWS_AS(cfg.get_bool("scenario.sizing_mode"), ConfigError);
    cfg.set("design.bess_mw", "ten");
    CHECK_THROWS_AS(cfg.get_double("design.bess_mw"), ConfigError);
}

TEST_CASE("config file parsing reports the offending line") {
    const std::string path = "test_cfg_bad.txt";
    {
        std::ofstream os(path);
        os << "design.bess_mw = 12\n";
        os << "definitely.not.a.key = 1\n";
    }
    try {
        Config::from_file(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("year design presets") {
    Config cfg;
    const auto initial = app::year_design(cfg, "initial");
    CHECK(initial.fc_rating_mw() == Approx(35.0));
    const auto d1 = app::year_design(cfg, "design1");
    CHECK(d1.fc_rating_mw() == Approx(30.0));
    CHECK(d1.bess.energy_capacity_mwh == Approx(10.0));
    const auto d2 = app::year_design(cfg, "design2");
    CHECK(d2.fc_rating_mw() == Approx(25.0));
    CHECK(d2.bess.energy_capacity_mwh == Approx(300.0));
    CHECK_THROWS_AS(app::year_design(cfg, "design9"), ConfigError);
}

TEST_CASE("sweep sizing rule") {
    Config cfg;
    const auto base = app::year_design(cfg, "design1");
    // factor 1.0 reproduces the base farm: 27.5 + 35 = 62.5 MW demand
    // rounds to the nearest whole turbine, eight of 8 MW
    const auto f10 = app::sweep_design(base, 1.0);
    CHECK(f10.wind_rating_mw() == Approx(64.0));
    CHECK(f10.ely_rating_mw() == Approx(35.0));
    // factor 1.8 gives the 88 / 63 MW pairing
    const auto f18 = app::sweep_design(base, 1.8);
    CHECK(f18.wind_rating_mw() == Approx(88.0));
    CHECK(f18.ely_rating_mw() == Approx(63.0));
    // hydrogen production scales with the trains
    CHECK(f18.ely_nominal_nm3ph == Approx(1800.0));
    const auto f20 = app::sweep_design(base, 2.0);
    CHECK(f20.wind_rating_mw() == Approx(96.0));
    CHECK(f20.ely_rating_mw() == Approx(70.0));
}

TEST_CASE("event markers parse into contingency directions") {
    std::vector<engine::EventSpec> fixed;
    auto marker = app::parse_event("wt_trip@worst_discharge", fixed);
    REQUIRE(marker.has_value());
    CHECK(marker->first == engine::EventSpec::Kind::trip_wind_turbine);
    CHECK(marker->second == engine::EventSpec::When::worst_discharge);
    CHECK(fixed.empty());

    marker = app::parse_event("load_trip@worst_charge", fixed);
    REQUIRE(marker.has_value());
    CHECK(marker->second == engine::EventSpec::When::worst_charge);

    marker = app::parse_event("load_trip@5430", fixed);
    CHECK_FALSE(marker.has_value());
    REQUIRE(fixed.size() == 1);
    CHECK(fixed[0].time_s == Approx(5430.0));

    CHECK_FALSE(app::parse_event("none", fixed).has_value());
    CHECK_THROWS_AS(app::parse_event("meteor@worst_charge", fixed), ConfigError);
    CHECK_THROWS_AS(app::parse_event("wt_trip", fixed), ConfigError);
}

TEST_CASE("scenario assembly from config") {
    Config cfg;
    cfg.set("scenario.duration_s", "600");
    const auto sc = app::scenario_from(cfg);
    CHECK(sc.field.n_turbines == 8);
    CHECK(sc.field.n_steps == 600);
    CHECK(sc.bess_sizing_mode);
    CHECK(sc.seed == config::kReferenceSeed);
}

TEST_CASE("bundled synthetic year matches its committed CSV") {
    Config cfg;
    const auto synthetic = app::annual_means_from(cfg);
    REQUIRE(synthetic.size() == wind::kHoursPerYear);
    const std::string asset = std::string(HUBSIM_SOURCE_DIR) + "/assets/annual_mean_wind.csv";
    const auto bundled = wind::read_annual_csv(asset);
    for (std::size_t h = 0; h < wind::kHoursPerYear; h += 53)
        CHECK(bundled[h] == Approx(synthetic[h]).epsilon(1e-7));
}

TEST_CASE("an exported wind field reimports into the same scenario") {
    Config cfg;
    cfg.set("scenario.duration_s", "400");
    const auto sc = app::scenario_from(cfg);
    const std::string path = "test_field_roundtrip.csv";
    wind::write_field_csv(sc.field, path);

    Config cfg2 = cfg;
    cfg2.set("wind.field_csv", path);
    const auto sc2 = app::scenario_from(cfg2);
    REQUIRE(sc2.field.n_steps == sc.field.n_steps);
    const auto a = engine::run(sc);
    const auto b = engine::run(sc2);
    for (std::size_t i = 0; i < a.trace.size(); i += 37)
        CHECK(b.trace[i].bess_requested_mw ==
              Approx(a.trace[i].bess_requested_mw).margin(1e-4));
    std::remove(path.c_str());
}

TEST_CASE("annual csv override feeds the year run") {
    Config cfg;
    const std::string path = "test_year_in.csv";
    std::vector<double> year(wind::kHoursPerYear, 0.0);
    wind::write_annual_csv(year, path);
    cfg.set("wind.annual_csv", path);
    const auto means = app::annual_means_from(cfg);
    CHECK(means == year);
    std::remove(path.c_str());
}
