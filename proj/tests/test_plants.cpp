#include <catch2/catch.hpp>

#include <cmath>

#include "hubsim/plants.hpp"
#include "hubsim/rng.hpp"

using namespace hubsim;
using namespace hubsim::plants;

TEST_CASE("linear ramp law") {
    CHECK(ramp_toward(0.0, 1.0, 706.0, 706.0) == Approx(1.0));
    CHECK(ramp_toward(0.0, 1.0, 706.0, 353.0) == Approx(0.5));
    CHECK(ramp_toward(0.4, 0.4, 11.0, 1.0) == Approx(0.4));
    CHECK(ramp_toward(1.0, 0.0, 10.0, 5.0) == Approx(0.5));

    Rng rng(1);
    for (int it = 0; it < 500; ++it) {
        const double load = rng.uniform();
        const double target = rng.uniform();
        const double ramp = rng.uniform(1.0, 1000.0);
        const double dt = rng.uniform(0.1, 120.0);
        const double next = ramp_toward(load, target, ramp, dt);
        CHECK(std::abs(next - load) <= dt / ramp + 1e-12);
        CHECK(next >= 0.0);
        CHECK(next <= 1.0);
        // never overshoots the target
        if (target >= load) {
            CHECK(next >= load - 1e-15);
            CHECK(next <= target + 1e-15);
        } else {
            CHECK(next <= load + 1e-15);
            CHECK(next >= target - 1e-15);
        }
    }
}

TEST_CASE("electrolyzer hydrogen rate") {
    const ElectrolyzerTrain train{};  // 5 MW, 1000 Nm3/h
    const double kg_per_nm3 = 2.016 / 22.414;  // molar mass over molar volume
    CHECK(ely_hydrogen_rate_kgph(5.0, train) == Approx(1000.0 * kg_per_nm3).epsilon(1e-9));
    CHECK(ely_hydrogen_rate_kgph(5.0, train) == Approx(89.94).epsilon(1e-3));
    CHECK(ely_hydrogen_rate_kgph(0.0, train) == 0.0);
    CHECK(ely_hydrogen_rate_kgph(2.5, train) == Approx(500.0 * kg_per_nm3).epsilon(1e-9));
    CHECK_THROWS_AS(ely_hydrogen_rate_kgph(5.5, train), std::invalid_argument);
    CHECK_THROWS_AS(ely_hydrogen_rate_kgph(-0.1, train), std::invalid_argument);

    Rng rng(2);
    for (int it = 0; it < 200; ++it) {
        const double p = rng.uniform(0.0, 5.0);
        const double a = rng.uniform(0.1, 1.0);
        CHECK(ely_hydrogen_rate_kgph(a * p, train) ==
              Approx(a * ely_hydrogen_rate_kgph(p, train)).margin(1e-12));
    }
}

TEST_CASE("fuel cell hydrogen consumption") {
    const FuelCellBlock block{};  // 5 MW, 60 kg/MWh
    CHECK(fc_hydrogen_consumption_kg(5.0, block, 1.0) == Approx(300.0).epsilon(1e-12));
    CHECK(fc_hydrogen_consumption_kg(0.0, block, 1.0) == 0.0);
    CHECK(fc_hydrogen_consumption_kg(2.0, block, 0.5) == Approx(60.0).epsilon(1e-12));
    CHECK_THROWS_AS(fc_hydrogen_consumption_kg(5.1, block, 1.0), std::invalid_argument);

    Rng rng(3);
    for (int it = 0; it < 200; ++it) {
        const double p = rng.uniform(0.0, 5.0);
        const double a = rng.uniform(0.1, 1.0);
        CHECK(fc_hydrogen_consumption_kg(a * p, block, 0.25) ==
              Approx(a * fc_hydrogen_consumption_kg(p, block, 0.25)).margin(1e-12));
    }
}

TEST_CASE("bess bookkeeping examples") {
    Bess b;
    b.power_rating_mw = 10.0;
    b.energy_capacity_mwh = 10.0;
    b.soc = 0.5;

    SECTION("ideal-efficiency charge") {
        const auto step = bess_apply(-5.0, b, 0.1);
        CHECK(step.actual_mw == Approx(-5.0));
        CHECK(step.new_soc == Approx(0.55).epsilon(1e-12));
        CHECK_FALSE(step.clipped);
    }
    SECTION("power rating clips the request") {
        const auto step = bess_apply(-18.8, b, 1.0 / 3600.0);
        CHECK(step.actual_mw == Approx(-10.0));
        CHECK(step.clipped);
    }
    SECTION("empty battery cannot discharge") {
        b.soc = b.soc_min;
        const auto step = bess_apply(1.0, b, 0.1);
        CHECK(step.actual_mw == Approx(0.0).margin(1e-12));
        CHECK(step.new_soc == Approx(b.soc_min));
        CHECK(step.clipped);
    }
    SECTION("sizing mode ignores the MW limit but not the energy window") {
        const auto step = bess_apply(-18.8, b, 1.0 / 3600.0, false);
        CHECK(step.actual_mw == Approx(-18.8));
        CHECK_FALSE(step.clipped);
    }
}

TEST_CASE("bess never leaves its SOC window or power rating") {
    Rng rng(4);
    for (int cfg = 0; cfg < 50; ++cfg) {
        Bess b;
        b.power_rating_mw = rng.uniform(1.0, 30.0);
        b.energy_capacity_mwh = rng.uniform(1.0, 50.0);
        b.soc_min = rng.uniform(0.0, 0.2);
        b.soc_max = rng.uniform(0.8, 1.0);
        b.soc = rng.uniform(b.soc_min, b.soc_max);
        b.round_trip_efficiency = (cfg % 2 == 0) ? 1.0 : 0.9;
        const double dt_h = rng.uniform(1.0 / 3600.0, 0.2);
        double energy_sum = 0.0;
        const double soc0 = b.soc;
        for (int it = 0; it < 200; ++it) {
            const auto step = bess_apply(rng.uniform(-40.0, 40.0), b, dt_h);
            CHECK(std::abs(step.actual_mw) <= b.power_rating_mw + 1e-9);
            CHECK(step.new_soc >= b.soc_min - 1e-12);
            CHECK(step.new_soc <= b.soc_max + 1e-12);
            b.soc = step.new_soc;
            energy_sum += step.actual_mw * dt_h;
        }
        if (b.round_trip_efficiency == 1.0) {
            const double expected = soc0 - energy_sum / b.energy_capacity_mwh;
            CHECK(b.soc == Approx(expected).epsilon(1e-9).margin(1e-12));
        }
    }
}

TEST_CASE("bess efficiency splits between directions") {
    Bess b;
    b.power_rating_mw = 10.0;
    b.energy_capacity_mwh = 10.0;
    b.soc = 0.5;
    b.round_trip_efficiency = 0.81;  // sqrt(eta) = 0.9 per direction
    const auto chg = bess_apply(-10.0, b, 0.1);
    CHECK(chg.new_soc == Approx(0.5 + 1.0 * 0.9 / 10.0).epsilon(1e-12));
    b.soc = chg.new_soc;
    const auto dis = bess_apply(10.0, b, 0.1);
    CHECK(dis.new_soc == Approx(b.soc - 1.0 / 0.9 / 10.0).epsilon(1e-12));
}

TEST_CASE("hydrogen tank bookkeeping") {
    HydrogenTank t;
    t = tank_update(t, 89.9, 0.0);
    CHECK(t.level_kg == Approx(89.9));
    t.level_kg = 100.0;
    t = tank_update(t, 0.0, 300.0);
    CHECK(t.level_kg == Approx(-200.0));  // unbounded mode tracks net imports

    HydrogenTank bounded;
    bounded.capacity_kg = 150.0;
    bounded = tank_update(bounded, 200.0, 10.0);
    CHECK(bounded.level_kg == Approx(150.0));
    CHECK(bounded.spilled_kg == Approx(40.0));

    CHECK_THROWS_AS(tank_update(t, -1.0, 0.0), std::invalid_argument);

    // mass balance with spill accounting
    Rng rng(6);
    HydrogenTank acc;
    acc.capacity_kg = 500.0;
    double produced = 0.0, consumed = 0.0;
    for (int it = 0; it < 300; ++it) {
        const double p = rng.uniform(0.0, 30.0);
        const double c = rng.uniform(0.0, std::max(acc.level_kg + p, 0.0));
        acc = tank_update(acc, p, c);
        produced += p;
        consumed += c;
    }
    CHECK(acc.level_kg == Approx(produced - consumed - acc.spilled_kg).epsilon(1e-9));
}

TEST_CASE("platform load totals") {
    auto loads = default_platforms();
    auto t = total_load(loads);
    CHECK(t.p_mw == Approx(27.5));
    // Q = P tan(acos(pf)); tan(acos(0.8)) = 0.75
    CHECK(t.q_mvar == Approx(27.5 * std::tan(std::acos(0.8))).epsilon(1e-12));
    CHECK(t.q_mvar == Approx(27.5 * 0.75).epsilon(1e-9));

    for (auto& l : loads) l.connected = false;
    t = total_load(loads);
    CHECK(t.p_mw == 0.0);
    CHECK(t.q_mvar == 0.0);
}

TEST_CASE("design validation catches inconsistent batteries") {
    Bess b;
    b.soc = 1.2;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = Bess{};
    b.power_rating_mw = 0.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
}
