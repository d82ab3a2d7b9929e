#pragma once

// Dispatchable units of the hub: electrolyzer trains, fuel-cell blocks, the
// grid-forming BESS, the hydrogen inventory and the platform loads. All are
// small value types stepped by the engine; operations here are pure.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hubsim/errors.hpp"

namespace hubsim::plants {

/// H2 mass per normal cubic meter: molar mass over molar volume at 0 degC, 1 atm.
inline constexpr double kH2KgPerNm3 = 2.016 / 22.414;

struct ElectrolyzerTrain {
    double rating_mw = 5.0;
    double ramp_time_full_s = 706.0;        // zero to full load
    double load = 0.0;                      // fraction of rating
    double target = 0.0;
    double nominal_production_nm3ph = 1000.0;  // at rated power
    bool connected = true;
};

struct FuelCellBlock {
    double rating_mw = 5.0;
    double apparent_rating_mva = 5.0;       // AFE converter rating
    double ramp_time_full_s = 10.0;
    double load = 0.0;
    double target = 0.0;
    double specific_consumption_kg_per_mwh = 60.0;
    bool connected = true;
};

struct Bess {
    double power_rating_mw = 10.0;
    double energy_capacity_mwh = 10.0;
    double apparent_rating_mva = 20.0;
    double soc = 0.5;
    double soc_min = 0.0;
    double soc_max = 1.0;
    double round_trip_efficiency = 1.0;

    void validate() const {
        if (!(power_rating_mw > 0.0) || !(energy_capacity_mwh > 0.0))
            throw ConfigError("bess: power and energy ratings must be positive");
        if (!(0.0 <= soc_min && soc_min <= soc && soc <= soc_max && soc_max <= 1.0))
            throw ConfigError("bess: require 0 <= soc_min <= soc <= soc_max <= 1");
        if (!(round_trip_efficiency > 0.0 && round_trip_efficiency <= 1.0))
            throw ConfigError("bess: round-trip efficiency must be in (0, 1]");
    }
};

struct HydrogenTank {
    double level_kg = 0.0;               // negative values track net imports
    std::optional<double> capacity_kg;   // bounded mode caps here
    double spilled_kg = 0.0;             // cumulative production vented at cap

    bool bounded() const { return capacity_kg.has_value(); }
};

struct PlatformLoad {
    double active_power_mw = 4.0;
    double power_factor = 0.8;
    int priority = 1;       // lower sheds first
    bool connected = true;
};

/// The six O&G platforms of the base system: two at 5.75 MW, four at 4 MW,
/// all at power factor 0.8. The smaller platforms shed first.
inline std::vector<PlatformLoad> default_platforms() {
    std::vector<PlatformLoad> loads;
    loads.push_back({5.75, 0.8, 2, true});
    loads.push_back({5.75, 0.8, 2, true});
    for (int i = 0; i < 4; ++i) loads.push_back({4.0, 0.8, 1, true});
    return loads;
}

/// One linear ramp step: move `load` toward `target` at rate
/// 1/ramp_time_full per second, both directions.
inline double ramp_toward(double load, double target, double ramp_time_full_s, double dt_s) {
    const double step = dt_s / ramp_time_full_s;
    const double delta = std::clamp(target - load, -step, step);
    return std::clamp(load + delta, 0.0, 1.0);
}

/// Hydrogen production rate, proportional to electrical power; rated power
/// gives the nominal volumetric production converted to mass.
inline double ely_hydrogen_rate_kgph(double power_mw, const ElectrolyzerTrain& train) {
    if (!(power_mw >= -1e-9) || power_mw > train.rating_mw * (1.0 + 1e-9))
        throw std::invalid_argument("ely_hydrogen_rate: power outside [0, rating]");
    return std::max(power_mw, 0.0) / train.rating_mw * train.nominal_production_nm3ph * kH2KgPerNm3;
}

inline double fc_hydrogen_consumption_kg(double power_mw, const FuelCellBlock& block, double dt_h) {
    if (!(power_mw >= -1e-9) || power_mw > block.rating_mw * (1.0 + 1e-9))
        throw std::invalid_argument("fc_hydrogen_consumption: power outside [0, rating]");
    return std::max(power_mw, 0.0) * dt_h * block.specific_consumption_kg_per_mwh;
}

struct BessStep {
    double actual_mw = 0.0;  // signed, + discharge / - charge
    double new_soc = 0.0;
    bool clipped = false;
};

/// Apply a signed power request to the battery for dt hours. The delivered
/// power is limited by the MW rating (unless enforce_power_limit is off,
/// the sizing-study mode) and by the SOC window; efficiency is split as
/// sqrt(eta) on each direction. Clipping is signalled, never thrown.
inline BessStep bess_apply(double requested_mw, const Bess& bess, double dt_h,
                           bool enforce_power_limit = true) {
    if (!(dt_h > 0.0)) throw std::invalid_argument("bess_apply: dt must be positive");
    const double sqrt_eta = std::sqrt(bess.round_trip_efficiency);
    double actual = requested_mw;
    if (enforce_power_limit)
        actual = std::clamp(actual, -bess.power_rating_mw, bess.power_rating_mw);

    double new_soc;
    if (actual >= 0.0) {
        const double max_by_energy =
            (bess.soc - bess.soc_min) * bess.energy_capacity_mwh * sqrt_eta / dt_h;
        actual = std::min(actual, std::max(max_by_energy, 0.0));
        new_soc = bess.soc - actual * dt_h / (sqrt_eta * bess.energy_capacity_mwh);
    } else {
        const double max_by_energy =
            (bess.soc_max - bess.soc) * bess.energy_capacity_mwh / (sqrt_eta * dt_h);
        actual = std::max(actual, -std::max(max_by_energy, 0.0));
        new_soc = bess.soc + (-actual) * dt_h * sqrt_eta / bess.energy_capacity_mwh;
    }
    new_soc = std::clamp(new_soc, bess.soc_min, bess.soc_max);
    const bool clipped = std::abs(actual - requested_mw) > 1e-12 * std::max(1.0, std::abs(requested_mw));
    return {actual, new_soc, clipped};
}

/// Inventory bookkeeping; unbounded mode lets the level run negative and
/// measures the net import need, bounded mode vents production at the cap.
inline HydrogenTank tank_update(const HydrogenTank& tank, double produced_kg, double consumed_kg) {
    if (!(produced_kg >= 0.0) || !(consumed_kg >= 0.0))
        throw std::invalid_argument("tank_update: produced and consumed must be >= 0");
    HydrogenTank out = tank;
    out.level_kg = tank.level_kg + produced_kg - consumed_kg;
    if (out.bounded() && out.level_kg > *out.capacity_kg) {
        out.spilled_kg += out.level_kg - *out.capacity_kg;
        out.level_kg = *out.capacity_kg;
    }
    return out;
}

struct LoadTotals {
    double p_mw = 0.0;
    double q_mvar = 0.0;
};

inline LoadTotals total_load(std::span<const PlatformLoad> platforms) {
    LoadTotals t;
    for (const auto& pl : platforms) {
        if (!pl.connected) continue;
        t.p_mw += pl.active_power_mw;
        t.q_mvar += pl.active_power_mw * std::tan(std::acos(pl.power_factor));
    }
    return t;
}

} // namespace hubsim::plants
