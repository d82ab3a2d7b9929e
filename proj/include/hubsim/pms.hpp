#pragma once

// Power management system: secondary-control dispatch of electrolyzer and
// fuel-cell plant targets, wind curtailment setpoint, SOC regulation bias,
// unit allocation (sequence vs synchronized), reactive-power split between
// the fuel-cell AFE converters and the BESS, and the droop frequency proxy.
// All functions are pure decisions over explicit state.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hubsim/errors.hpp"

namespace hubsim::pms {

enum class Allocation { sequence, synchronized };
enum class Mode { surplus, deficit, blackout };

struct ControlConfig {
    double soc_target = 0.5;
    double soc_gain_mw_per_unit = 40.0;  // proportional SOC regulation
    double soc_bias_cap_mw = 5.0;
    Allocation ely_allocation = Allocation::sequence;
    Allocation fc_allocation = Allocation::sequence;
    double freq_droop_pu = 0.04;
    double freq_lag_s = 2.0;             // inertia proxy time constant
    double mode_hysteresis_mw = 0.5;     // surplus/deficit switch deadband
    double nominal_frequency_hz = 50.0;
    // restoration of PMS-shed platforms once supply margin returns
    double reconnect_hold_s = 600.0;
    double reconnect_margin_mw = 1.0;
    // thyristor rectifier displacement factor, linear in loading
    double ely_pf_low = 0.5;
    double ely_pf_full = 0.9;
    double ely_pf_knee_load = 0.1;

    void validate() const {
        if (!(soc_target > 0.0 && soc_target < 1.0))
            throw ConfigError("control: soc_target must be in (0, 1)");
        if (!(freq_droop_pu > 0.0)) throw ConfigError("control: droop must be positive");
        if (!(soc_gain_mw_per_unit >= 0.0) || !(soc_bias_cap_mw >= 0.0))
            throw ConfigError("control: SOC gain and cap must be >= 0");
        if (!(mode_hysteresis_mw >= 0.0)) throw ConfigError("control: hysteresis must be >= 0");
        if (!(reconnect_hold_s >= 0.0) || !(reconnect_margin_mw >= 0.0))
            throw ConfigError("control: reconnect hold and margin must be >= 0");
        if (!(ely_pf_low > 0.0 && ely_pf_low <= 1.0 && ely_pf_full > 0.0 && ely_pf_full <= 1.0))
            throw ConfigError("control: electrolyzer power factors must be in (0, 1]");
        if (!(ely_pf_knee_load >= 0.0 && ely_pf_knee_load < 1.0))
            throw ConfigError("control: pf knee load must be in [0, 1)");
    }
};

struct FrequencyState {
    double deviation_hz = 0.0;
    double nominal_hz = 50.0;
};

struct DispatchDecision {
    double ely_plant_target_mw = 0.0;
    double fc_plant_target_mw = 0.0;
    double wind_setpoint_mw = 0.0;
    Mode mode = Mode::surplus;
};

/// Signed power bias regulating the SOC toward its target: positive means
/// extra demand (the battery should charge), capped.
inline double soc_regulation_power_mw(double soc, const ControlConfig& cfg) {
    const double bias = cfg.soc_gain_mw_per_unit * (cfg.soc_target - soc);
    return std::clamp(bias, -cfg.soc_bias_cap_mw, cfg.soc_bias_cap_mw);
}

/// Secondary-control plant targets from availability measurements. Surplus
/// (wind above load plus charge bias) goes to the electrolyzers, wind is
/// curtailed only once they are at plant rating; deficit brings the fuel
/// cells online, gated by the hydrogen available for this step. Exactly one
/// of the two targets is nonzero. Mode switches carry a hysteresis band.
inline DispatchDecision dispatch_targets(double wind_avail_mw, double p_load_mw, double soc_bias_mw,
                                         double h2_available_power_mw, double ely_rating_mw,
                                         double fc_rating_mw, const ControlConfig& cfg,
                                         Mode prev_mode) {
    const double net = wind_avail_mw - p_load_mw - soc_bias_mw;

    Mode mode;
    if (prev_mode == Mode::surplus) {
        mode = (net < -cfg.mode_hysteresis_mw) ? Mode::deficit : Mode::surplus;
    } else {
        mode = (net > cfg.mode_hysteresis_mw) ? Mode::surplus : Mode::deficit;
    }

    DispatchDecision d;
    if (mode == Mode::surplus) {
        d.mode = Mode::surplus;
        d.ely_plant_target_mw = std::clamp(net, 0.0, ely_rating_mw);
        d.fc_plant_target_mw = 0.0;
        d.wind_setpoint_mw = (net > ely_rating_mw)
            ? p_load_mw + soc_bias_mw + ely_rating_mw
            : wind_avail_mw;
    } else {
        d.mode = Mode::deficit;
        const double deficit = std::max(-net, 0.0);
        d.fc_plant_target_mw =
            std::min({deficit, fc_rating_mw, std::max(h2_available_power_mw, 0.0)});
        d.ely_plant_target_mw = 0.0;
        d.wind_setpoint_mw = wind_avail_mw;
        if (wind_avail_mw <= 1e-6 && h2_available_power_mw <= 1e-6) d.mode = Mode::blackout;
    }
    return d;
}

struct AllocationResult {
    std::vector<double> unit_targets_mw;
    bool clamped = false;  // plant target exceeded the installed rating
};

/// One-by-one dispatch: fill units in fixed ascending order, each to its
/// rating before the next one starts.
inline AllocationResult allocate_sequence(double plant_target_mw, std::span<const double> unit_ratings_mw) {
    double total = 0.0;
    for (double r : unit_ratings_mw) total += r;
    AllocationResult res;
    res.clamped = plant_target_mw > total + 1e-9;
    double remaining = std::clamp(plant_target_mw, 0.0, total);
    res.unit_targets_mw.resize(unit_ratings_mw.size(), 0.0);
    for (std::size_t i = 0; i < unit_ratings_mw.size() && remaining > 0.0; ++i) {
        const double u = std::min(unit_ratings_mw[i], remaining);
        res.unit_targets_mw[i] = u;
        remaining -= u;
    }
    return res;
}

/// Synchronized dispatch: every unit at the same loading fraction.
inline AllocationResult allocate_synchronized(double plant_target_mw,
                                              std::span<const double> unit_ratings_mw) {
    double total = 0.0;
    for (double r : unit_ratings_mw) total += r;
    AllocationResult res;
    res.clamped = plant_target_mw > total + 1e-9;
    res.unit_targets_mw.resize(unit_ratings_mw.size(), 0.0);
    if (total <= 0.0) return res;
    const double frac = std::clamp(plant_target_mw, 0.0, total) / total;
    for (std::size_t i = 0; i < unit_ratings_mw.size(); ++i)
        res.unit_targets_mw[i] = frac * unit_ratings_mw[i];
    return res;
}

inline AllocationResult allocate(Allocation mode, double plant_target_mw,
                                 std::span<const double> unit_ratings_mw) {
    return mode == Allocation::sequence ? allocate_sequence(plant_target_mw, unit_ratings_mw)
                                        : allocate_synchronized(plant_target_mw, unit_ratings_mw);
}

/// Displacement power factor of a thyristor rectifier train at a loading
/// fraction: pf_low below the knee, linear up to pf_full at full load.
inline double electrolyzer_power_factor(double loading, const ControlConfig& cfg) {
    if (loading <= cfg.ely_pf_knee_load) return cfg.ely_pf_low;
    const double w = (std::min(loading, 1.0) - cfg.ely_pf_knee_load) / (1.0 - cfg.ely_pf_knee_load);
    return cfg.ely_pf_low + (cfg.ely_pf_full - cfg.ely_pf_low) * w;
}

inline double electrolyzer_reactive_demand_mvar(double loading, double rating_mw,
                                                const ControlConfig& cfg) {
    if (loading <= 0.0) return 0.0;
    const double pf = electrolyzer_power_factor(loading, cfg);
    return loading * rating_mw * std::tan(std::acos(pf));
}

struct ReactiveSplit {
    double q_afe_mvar = 0.0;
    double q_bess_mvar = 0.0;
};

/// AFE-first reactive dispatch: the fuel-cell converters cover the demand up
/// to their circle-limit headroom sqrt(S^2 - P^2); the BESS converter takes
/// only the remainder.
inline ReactiveSplit reactive_dispatch(std::span<const double> fc_block_p_mw, double q_demand_mvar,
                                       std::span<const double> afe_ratings_mva) {
    if (fc_block_p_mw.size() != afe_ratings_mva.size())
        throw ConfigError("reactive_dispatch: block and converter counts differ");
    double headroom = 0.0;
    for (std::size_t i = 0; i < afe_ratings_mva.size(); ++i) {
        const double s = afe_ratings_mva[i];
        const double p = fc_block_p_mw[i];
        headroom += std::sqrt(std::max(s * s - p * p, 0.0));
    }
    ReactiveSplit out;
    out.q_afe_mvar = std::min(std::max(q_demand_mvar, 0.0), headroom);
    out.q_bess_mvar = std::max(q_demand_mvar, 0.0) - out.q_afe_mvar;
    return out;
}

/// First-order droop proxy for the grid-forming frequency: steady-state
/// deviation -droop * nominal * (requested / rating), lagged by freq_lag_s.
/// Uses the pre-clip request, so an undersized battery shows up as a larger
/// excursion rather than a hidden one.
inline FrequencyState frequency_step(FrequencyState state, double bess_requested_mw,
                                     double bess_rating_mw, const ControlConfig& cfg, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("frequency_step: dt must be positive");
    const double pu = bess_rating_mw > 0.0 ? bess_requested_mw / bess_rating_mw : 0.0;
    const double target = -cfg.freq_droop_pu * state.nominal_hz * pu;
    const double alpha = cfg.freq_lag_s > 0.0 ? std::min(1.0, dt_s / cfg.freq_lag_s) : 1.0;
    state.deviation_hz += alpha * (target - state.deviation_hz);
    return state;
}

} // namespace hubsim::pms
