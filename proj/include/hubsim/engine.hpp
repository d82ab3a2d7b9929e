#pragma once

// Scenario orchestration: the fixed-step simulation loop, event injection
// (turbine and load trips), the worst-instant contingency procedure, and
// year-long runs assembled from hourly mean winds.
//
// Step ordering within one dt: resolve events, compute available wind,
// dispatch targets from previous-step measurements, ramp the plants, settle
// the BESS residual, update the hydrogen inventory, split reactive power,
// advance the frequency proxy, record.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hubsim/errors.hpp"
#include "hubsim/metrics.hpp"
#include "hubsim/plants.hpp"
#include "hubsim/pms.hpp"
#include "hubsim/record.hpp"
#include "hubsim/wind.hpp"

namespace hubsim::engine {

/// Component ratings of one hub design.
struct DesignSpec {
    wind::TurbineSpec turbine;
    std::size_t n_turbines = 8;
    double farm_spacing_d = 5.0;
    /// First-order response of delivered turbine power to its setpoint
    /// (rotor inertia plus the turbine and pitch controllers smooth power
    /// over several seconds); 0 disables.
    double wind_power_lag_s = 10.0;
    /// A turbine that reaches cut-out stays stopped until the wind falls
    /// back to this speed, so storm passages do not flap units on and off.
    double storm_restart_mps = 23.0;

    int n_ely_trains = 7;
    double ely_train_mw = 5.0;
    double ely_ramp_time_s = 706.0;
    double ely_nominal_nm3ph = 1000.0;  // per train at rated power

    int n_fc_blocks = 7;
    double fc_block_mw = 5.0;
    double fc_block_mva = 5.0;
    double fc_ramp_time_s = 10.0;
    double fc_specific_kg_per_mwh = 60.0;

    plants::Bess bess;
    double tank_capacity_kg = -1.0;  // < 0 means unbounded (net-import bookkeeping)
    double tank_initial_kg = 0.0;

    std::vector<plants::PlatformLoad> platforms = plants::default_platforms();

    double wind_rating_mw() const { return static_cast<double>(n_turbines) * turbine.rated_power_mw; }
    double ely_rating_mw() const { return n_ely_trains * ely_train_mw; }
    double fc_rating_mw() const { return n_fc_blocks * fc_block_mw; }
    double load_total_mw() const {
        double p = 0.0;
        for (const auto& l : platforms) p += l.active_power_mw;
        return p;
    }

    void validate() const {
        turbine.validate();
        bess.validate();
        if (n_turbines == 0) throw ConfigError("design: need at least one wind turbine");
        if (n_ely_trains < 0 || n_fc_blocks < 0) throw ConfigError("design: negative unit count");
        if (n_ely_trains > 0 &&
            !(ely_train_mw > 0.0 && ely_ramp_time_s > 0.0 && ely_nominal_nm3ph >= 0.0))
            throw ConfigError("design: electrolyzer rating, ramp time and production must be positive");
        if (n_fc_blocks > 0 &&
            !(fc_block_mw > 0.0 && fc_ramp_time_s > 0.0 && fc_specific_kg_per_mwh > 0.0))
            throw ConfigError("design: fuel-cell rating, ramp time and consumption must be positive");
        if (!(storm_restart_mps <= turbine.cut_out_mps))
            throw ConfigError("design: storm restart speed must not exceed cut-out");
        for (const auto& l : platforms)
            if (!(l.active_power_mw >= 0.0 && l.power_factor > 0.0 && l.power_factor <= 1.0))
                throw ConfigError("design: platform load needs P >= 0 and pf in (0, 1]");
    }
};

struct EventSpec {
    enum class Kind { trip_wind_turbine, trip_load };
    enum class When { at_time, worst_charge, worst_discharge };
    Kind kind = Kind::trip_wind_turbine;
    When when = When::at_time;
    double time_s = 0.0;
    int index = -1;  // unit index; -1 picks the biggest at the event time
};

struct Scenario {
    std::string name = "run";
    DesignSpec design;
    wind::WindField field;
    double dt_s = 1.0;
    double duration_s = 7200.0;
    std::vector<EventSpec> events;
    pms::ControlConfig control;
    std::uint64_t seed = 0;  // echoed; the field carries the realization
    /// Sizing studies let the BESS deliver the full balancing request so the
    /// trace measures the required MW rating; design evaluation keeps the
    /// installed limit and falls back to shedding when it binds.
    bool bess_sizing_mode = false;
    bool record_unit_loads = false;

    void validate() const {
        design.validate();
        control.validate();
        if (!(dt_s > 0.0)) throw ConfigError("scenario: dt must be positive");
        if (!(duration_s >= dt_s)) throw ConfigError("scenario: duration shorter than one step");
        if (field.n_turbines != design.n_turbines)
            throw ConfigError("scenario: wind field turbine count differs from design");
        if (std::abs(field.dt_s - dt_s) > 1e-9)
            throw ConfigError("scenario: wind field dt differs from scenario dt");
        if (field.duration_s() + 1e-6 < duration_s)
            throw ConfigError("scenario: wind field shorter than scenario duration");
        for (const auto& ev : events)
            if (ev.when == EventSpec::When::at_time && (ev.time_s < 0.0 || ev.time_s > duration_s))
                throw ConfigError("scenario: event time outside the run");
    }
};

struct RunResult {
    std::string name;
    std::vector<StepRecord> trace;
    metrics::KpiReport kpis;
    DesignSpec design;
    std::uint64_t seed = 0;
    double h2_spilled_kg = 0.0;  // production vented at the tank cap
    // per-step unit loading fractions plus a flag marking steps where a
    // converter unit was tripped or fuel-starved (breaker-scale events that
    // sit outside the ramp law); only filled when record_unit_loads is set
    std::vector<std::vector<double>> ely_unit_loads;
    std::vector<std::vector<double>> fc_unit_loads;
    std::vector<char> unit_event_step;
};

namespace detail {

struct UnitState {
    std::vector<plants::ElectrolyzerTrain> trains;
    std::vector<plants::FuelCellBlock> blocks;
};

} // namespace detail

/// Run one scenario. Deterministic; never aborts mid-run on limit clipping
/// (that is recorded), only on internal balance-check failure.
inline RunResult run(const Scenario& sc) {
    sc.validate();
    const auto n_steps = static_cast<std::size_t>(std::llround(sc.duration_s / sc.dt_s));
    const double dt_h = sc.dt_s / 3600.0;

    std::vector<plants::ElectrolyzerTrain> trains(
        static_cast<std::size_t>(sc.design.n_ely_trains),
        plants::ElectrolyzerTrain{sc.design.ely_train_mw, sc.design.ely_ramp_time_s, 0.0, 0.0,
                                  sc.design.ely_nominal_nm3ph, true});
    std::vector<plants::FuelCellBlock> blocks(
        static_cast<std::size_t>(sc.design.n_fc_blocks),
        plants::FuelCellBlock{sc.design.fc_block_mw, sc.design.fc_block_mva, sc.design.fc_ramp_time_s,
                              0.0, 0.0, sc.design.fc_specific_kg_per_mwh, true});
    plants::Bess bess = sc.design.bess;
    plants::HydrogenTank tank;
    tank.level_kg = sc.design.tank_initial_kg;
    if (sc.design.tank_capacity_kg >= 0.0) tank.capacity_kg = sc.design.tank_capacity_kg;

    std::vector<plants::PlatformLoad> loads = sc.design.platforms;  // .connected = event trips
    std::vector<char> shed_flag(loads.size(), 0);                   // PMS shedding, still demanded
    std::vector<char> turbine_on(sc.design.n_turbines, 1);

    std::vector<double> ely_ratings(trains.size()), fc_ratings(blocks.size());
    std::vector<double> avail(sc.design.n_turbines), fc_p(blocks.size()), afe(blocks.size());
    std::vector<double> wt_power(sc.design.n_turbines, 0.0);  // delivered power per turbine
    // Cut-out logic runs on 10-minute-averaged wind, the way real storm
    // controllers do: an operating turbine rides through gusts above
    // cut-out, a stopped one restarts only after a hold time and once the
    // average has fallen back below the restart speed.
    constexpr double kStormFilterS = 600.0;
    constexpr double kStormHoldS = 1800.0;
    const double alpha_storm = std::min(1.0, sc.dt_s / kStormFilterS);
    std::vector<double> wt_mean_speed(sc.design.n_turbines, 0.0);
    std::vector<double> storm_hold_until(sc.design.n_turbines, 0.0);
    std::vector<char> storm_stop(sc.design.n_turbines, 0);

    pms::Mode mode = pms::Mode::surplus;
    pms::FrequencyState freq{0.0, sc.control.nominal_frequency_hz};

    auto events = sc.events;
    std::vector<char> fired(events.size(), 0);

    RunResult res;
    res.name = sc.name;
    res.design = sc.design;
    res.seed = sc.seed;
    res.trace.reserve(n_steps);

    // The PMS works on last-cycle measurements: delivered wind power plus
    // the turbines' availability signal, combined into a one-step-ahead
    // prediction of plant output so targets do not chase a stale value.
    double wind_actual_prev = 0.0, wind_avail_prev = 0.0;
    double load_served_prev = 0.0, soc_prev = bess.soc;
    std::size_t last_shed_step = 0;
    std::vector<double> fc_load_start(blocks.size(), 0.0);
    const double alpha_wt =
        sc.design.wind_power_lag_s > 0.0 ? 1.0 - std::exp(-sc.dt_s / sc.design.wind_power_lag_s)
                                         : 1.0;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * sc.dt_s;

        // available wind per turbine, needed before events so "biggest unit"
        // can be resolved at the event instant
        double wind_avail = 0.0;
        for (std::size_t j = 0; j < sc.design.n_turbines; ++j) {
            const double v = sc.field.speed(j, i);
            if (i == 0) wt_mean_speed[j] = v;
            wt_mean_speed[j] += alpha_storm * (v - wt_mean_speed[j]);
            if (storm_stop[j]) {
                if (t >= storm_hold_until[j] && wt_mean_speed[j] <= sc.design.storm_restart_mps)
                    storm_stop[j] = 0;
            } else if (wt_mean_speed[j] >= sc.design.turbine.cut_out_mps) {
                storm_stop[j] = 1;
                storm_hold_until[j] = t + kStormHoldS;
            }
            if (!turbine_on[j] || storm_stop[j]) {
                avail[j] = 0.0;
            } else {
                const double v_ride =
                    std::min(v, sc.design.turbine.cut_out_mps * (1.0 - 1e-9));
                avail[j] = wind::power_curve(v_ride, sc.design.turbine);
            }
            wind_avail += avail[j];
        }

        for (std::size_t e = 0; e < events.size(); ++e) {
            if (fired[e] || events[e].time_s > t + 1e-9) continue;
            fired[e] = 1;
            if (events[e].kind == EventSpec::Kind::trip_wind_turbine) {
                std::size_t idx = 0;
                if (events[e].index >= 0) {
                    idx = static_cast<std::size_t>(events[e].index);
                } else {
                    for (std::size_t j = 1; j < avail.size(); ++j)
                        if (avail[j] > avail[idx]) idx = j;
                }
                if (idx < turbine_on.size() && turbine_on[idx]) {
                    turbine_on[idx] = 0;
                    wind_avail -= avail[idx];
                    avail[idx] = 0.0;
                    wt_power[idx] = 0.0;  // breaker opens, output gone this step
                }
            } else {
                std::size_t idx = loads.size();
                if (events[e].index >= 0) {
                    idx = static_cast<std::size_t>(events[e].index);
                } else {
                    double best = -1.0;
                    for (std::size_t l = 0; l < loads.size(); ++l)
                        if (loads[l].connected && loads[l].active_power_mw > best) {
                            best = loads[l].active_power_mw;
                            idx = l;
                        }
                }
                if (idx < loads.size()) loads[idx].connected = false;
            }
        }

        if (i == 0) {
            wind_actual_prev = wind_avail;
            wind_avail_prev = wind_avail;
            load_served_prev = [&] {
                double p = 0.0;
                for (const auto& l : loads)
                    if (l.connected) p += l.active_power_mw;
                return p;
            }();
        }
        const double wind_pred =
            wind_actual_prev + alpha_wt * (wind_avail_prev - wind_actual_prev);

        // secondary control from previous-step measurements (one PMS cycle delay)
        const double soc_bias = pms::soc_regulation_power_mw(soc_prev, sc.control);
        double ely_rating_live = 0.0, fc_rating_live = 0.0;
        for (std::size_t u = 0; u < trains.size(); ++u) {
            ely_ratings[u] = trains[u].connected ? trains[u].rating_mw : 0.0;
            ely_rating_live += ely_ratings[u];
        }
        for (std::size_t u = 0; u < blocks.size(); ++u) {
            fc_ratings[u] = blocks[u].connected ? blocks[u].rating_mw : 0.0;
            fc_rating_live += fc_ratings[u];
        }
        const double h2_power_avail =
            tank.bounded() ? std::max(tank.level_kg, 0.0) /
                                 (sc.design.fc_specific_kg_per_mwh * std::max(dt_h, 1e-12))
                           : std::numeric_limits<double>::infinity();

        // restore shed platforms, most important first, once the supply
        // margin is back and the hold-off has passed
        if (static_cast<double>(i - last_shed_step) * sc.dt_s >= sc.control.reconnect_hold_s) {
            double served_now = 0.0;
            for (std::size_t l = 0; l < loads.size(); ++l)
                if (loads[l].connected && !shed_flag[l]) served_now += loads[l].active_power_mw;
            const double supply = wind_pred + std::min(fc_rating_live, h2_power_avail) +
                                  0.5 * bess.power_rating_mw;
            std::size_t pick = loads.size();
            for (std::size_t l = 0; l < loads.size(); ++l) {
                if (!loads[l].connected || !shed_flag[l]) continue;
                if (pick == loads.size() || loads[l].priority > loads[pick].priority) pick = l;
            }
            if (pick < loads.size() &&
                served_now + loads[pick].active_power_mw + sc.control.reconnect_margin_mw <= supply)
                shed_flag[pick] = 0;
        }
        const auto decision =
            pms::dispatch_targets(wind_pred, load_served_prev, soc_bias, h2_power_avail,
                                  ely_rating_live, fc_rating_live, sc.control, mode);
        mode = decision.mode;

        const auto ely_alloc =
            pms::allocate(sc.control.ely_allocation, decision.ely_plant_target_mw, ely_ratings);
        const auto fc_alloc =
            pms::allocate(sc.control.fc_allocation, decision.fc_plant_target_mw, fc_ratings);

        // Units start the window at their dispatched operating point; from
        // then on every move is ramp-limited.
        for (std::size_t u = 0; u < trains.size(); ++u) {
            auto& tr = trains[u];
            if (!tr.connected) {
                tr.load = 0.0;
                tr.target = 0.0;
                continue;
            }
            tr.target = ely_alloc.unit_targets_mw[u] / tr.rating_mw;
            tr.load = (i == 0) ? tr.target
                               : plants::ramp_toward(tr.load, tr.target, tr.ramp_time_full_s, sc.dt_s);
        }
        for (std::size_t u = 0; u < blocks.size(); ++u) {
            auto& bl = blocks[u];
            fc_load_start[u] = bl.load;
            if (!bl.connected) {
                bl.load = 0.0;
                bl.target = 0.0;
                continue;
            }
            bl.target = fc_alloc.unit_targets_mw[u] / bl.rating_mw;
            bl.load = (i == 0) ? bl.target
                               : plants::ramp_toward(bl.load, bl.target, bl.ramp_time_full_s, sc.dt_s);
        }

        // wind plant: a setpoint equal to the availability estimate means no
        // curtailment is commanded and the farm runs free; a lower value is
        // an upper limit. Delivered power tracks the per-turbine request
        // with a first-order response, except that trips cut it instantly.
        const bool curtailing = decision.wind_setpoint_mw < wind_pred - 1e-9;
        const double plant_setpoint = curtailing ? decision.wind_setpoint_mw : wind_avail;
        const double req_frac =
            wind_avail > 0.0 ? std::min(1.0, plant_setpoint / wind_avail) : 0.0;
        double wind_actual = 0.0;
        for (std::size_t j = 0; j < sc.design.n_turbines; ++j) {
            if (!turbine_on[j]) {
                wt_power[j] = 0.0;
                continue;
            }
            const double raw = avail[j] * req_frac;
            if (i == 0) {
                wt_power[j] = raw;
            } else {
                wt_power[j] += alpha_wt * (raw - wt_power[j]);
            }
            wind_actual += wt_power[j];
        }

        // balance settlement with the BESS as slack; when a limit binds the
        // PMS sheds load (priority order), curtails wind further, and trips
        // converter-interfaced units as the last resort
        plants::BessStep bs{};
        double residual = 0.0, requested = 0.0, p_ely = 0.0, p_fc = 0.0;
        double produced = 0.0, consumed = 0.0;
        double load_p = 0.0, shed_mw = 0.0;
        bool h2_starved = false, requested_set = false, fc_reserve_used = false;
        bool unit_event = false;

        for (int attempt = 0;; ++attempt) {
            p_ely = 0.0;
            produced = 0.0;
            for (const auto& tr : trains) {
                if (!tr.connected) continue;
                const double p = tr.load * tr.rating_mw;
                p_ely += p;
                produced += plants::ely_hydrogen_rate_kgph(p, tr) * dt_h;
            }
            p_fc = 0.0;
            consumed = 0.0;
            for (const auto& bl : blocks) {
                if (!bl.connected) continue;
                const double p = bl.load * bl.rating_mw;
                p_fc += p;
                consumed += plants::fc_hydrogen_consumption_kg(p, bl, dt_h);
            }

            if (tank.bounded() && consumed > tank.level_kg + produced + 1e-12) {
                // short supply of hydrogen: the fuel cells back off to what
                // the tank can actually deliver this step
                const double scale =
                    consumed > 0.0 ? std::max(tank.level_kg + produced, 0.0) / consumed : 0.0;
                for (auto& bl : blocks) bl.load *= scale;
                h2_starved = true;
                unit_event = true;
                continue;
            }

            load_p = 0.0;
            shed_mw = 0.0;
            for (std::size_t l = 0; l < loads.size(); ++l) {
                if (!loads[l].connected) continue;
                load_p += loads[l].active_power_mw;
                if (shed_flag[l]) shed_mw += loads[l].active_power_mw;
            }

            residual = (load_p - shed_mw + p_ely) - (wind_actual + p_fc);
            if (!requested_set) {
                requested = residual;
                requested_set = true;
            }
            bs = plants::bess_apply(residual, bess, dt_h, !sc.bess_sizing_mode);
            const double gap = residual - bs.actual_mw;
            if (std::abs(gap) <= 1e-9 || attempt > static_cast<int>(loads.size() + trains.size() + blocks.size()) + 4)
                break;

            if (gap > 0.0) {
                // undersupply: the fuel cells' fast ramp is the first
                // reserve (within the same per-step ramp bound, gated by
                // hydrogen), then platforms shed in priority order
                if (!fc_reserve_used && !h2_starved) {
                    fc_reserve_used = true;
                    double need = gap;
                    bool raised = false;
                    for (std::size_t u = 0; u < blocks.size() && need > 1e-12; ++u) {
                        auto& bl = blocks[u];
                        if (!bl.connected) continue;
                        const double reach =
                            std::min(1.0, fc_load_start[u] + sc.dt_s / bl.ramp_time_full_s);
                        const double headroom_mw = std::max(reach - bl.load, 0.0) * bl.rating_mw;
                        const double add = std::min(headroom_mw, need);
                        if (add > 0.0) {
                            bl.load += add / bl.rating_mw;
                            need -= add;
                            raised = true;
                        }
                    }
                    if (raised) continue;
                }
                std::size_t pick = loads.size();
                for (std::size_t l = 0; l < loads.size(); ++l) {
                    if (!loads[l].connected || shed_flag[l]) continue;
                    if (pick == loads.size() || loads[l].priority < loads[pick].priority) pick = l;
                }
                if (pick < loads.size()) {
                    shed_flag[pick] = 1;
                    last_shed_step = i;
                    continue;
                }
                // nothing left to shed: trip the highest-index loaded train
                bool tripped = false;
                for (std::size_t u = trains.size(); u-- > 0;) {
                    if (trains[u].connected && trains[u].load > 0.0) {
                        trains[u].connected = false;
                        tripped = true;
                        unit_event = true;
                        break;
                    }
                }
                if (tripped) continue;
                break;
            } else {
                // oversupply: spill wind first, then trip fuel-cell blocks
                if (wind_actual > 0.0) {
                    const double reduced = std::max(0.0, wind_actual + gap);
                    const double k = reduced / wind_actual;
                    for (auto& w : wt_power) w *= k;
                    wind_actual = reduced;
                    continue;
                }
                bool tripped = false;
                for (std::size_t u = blocks.size(); u-- > 0;) {
                    if (blocks[u].connected && blocks[u].load > 0.0) {
                        blocks[u].connected = false;
                        tripped = true;
                        unit_event = true;
                        break;
                    }
                }
                if (tripped) continue;
                break;
            }
        }

        tank = plants::tank_update(tank, produced, consumed);

        // reactive bookkeeping: platforms and rectifiers demand, AFE first
        double q_load = 0.0;
        for (std::size_t l = 0; l < loads.size(); ++l)
            if (loads[l].connected && !shed_flag[l])
                q_load += loads[l].active_power_mw * std::tan(std::acos(loads[l].power_factor));
        double q_ely = 0.0;
        for (const auto& tr : trains)
            if (tr.connected)
                q_ely += pms::electrolyzer_reactive_demand_mvar(tr.load, tr.rating_mw, sc.control);
        for (std::size_t u = 0; u < blocks.size(); ++u) {
            fc_p[u] = blocks[u].connected ? blocks[u].load * blocks[u].rating_mw : 0.0;
            afe[u] = blocks[u].connected ? blocks[u].apparent_rating_mva : 0.0;
        }
        const auto q_split = pms::reactive_dispatch(fc_p, q_load + q_ely, afe);

        freq = pms::frequency_step(freq, requested, sc.design.bess.power_rating_mw, sc.control, sc.dt_s);

        StepRecord rec;
        rec.t_s = t;
        rec.wind_avail_mw = wind_avail;
        rec.wind_actual_mw = wind_actual;
        rec.ely_p_mw = p_ely;
        rec.fc_p_mw = p_fc;
        rec.load_p_mw = load_p;
        rec.bess_p_mw = bs.actual_mw;
        rec.bess_requested_mw = requested;
        rec.q_load_mvar = q_load;
        rec.q_ely_mvar = q_ely;
        rec.q_afe_mvar = q_split.q_afe_mvar;
        rec.q_bess_mvar = q_split.q_bess_mvar;
        rec.soc = bs.new_soc;
        rec.h2_level_kg = tank.level_kg;
        rec.freq_dev_hz = freq.deviation_hz;
        rec.curtailed_mw = std::max(wind_avail - wind_actual, 0.0);
        rec.shed_mw = shed_mw;
        rec.clipped = bs.clipped || h2_starved;

        const double balance =
            wind_actual + p_fc + bs.actual_mw - ((load_p - shed_mw) + p_ely);
        if (std::abs(balance) > 1e-6)
            throw BalanceError("power balance violated at t=" + std::to_string(t) + " by " +
                               std::to_string(balance) + " MW");

        res.trace.push_back(rec);
        if (sc.record_unit_loads) {
            std::vector<double> el(trains.size()), fl(blocks.size());
            for (std::size_t u = 0; u < trains.size(); ++u) el[u] = trains[u].load;
            for (std::size_t u = 0; u < blocks.size(); ++u) fl[u] = blocks[u].load;
            res.ely_unit_loads.push_back(std::move(el));
            res.fc_unit_loads.push_back(std::move(fl));
            res.unit_event_step.push_back(unit_event ? 1 : 0);
        }

        bess.soc = bs.new_soc;
        wind_actual_prev = wind_actual;
        wind_avail_prev = wind_avail;
        load_served_prev = load_p - shed_mw;
        soc_prev = bess.soc;
    }

    res.h2_spilled_kg = tank.spilled_kg;

    metrics::KpiInputs ki;
    ki.dt_s = sc.dt_s;
    ki.wind_rating_mw = sc.design.wind_rating_mw();
    ki.ely_rating_mw = std::max(sc.design.ely_rating_mw(), 1e-12);
    ki.fc_rating_mw = std::max(sc.design.fc_rating_mw(), 1e-12);
    ki.soc_target = sc.control.soc_target;
    res.kpis = metrics::compute_kpis(res.trace, ki);
    return res;
}

struct AnnualWindSpec {
    std::vector<double> hourly_mean_mps;  // 8760 values
    wind::TurbulenceSpec turbulence;      // block means override mean_speed_mps
    bool wake_enabled = false;
    wind::WakeParams wake;
};

/// Year-long run at dt_long_s: assemble the annual wind field from hourly
/// means, then step the full dispatch chain over 8760 h with hydrogen
/// tracked net. Installed BESS limits are enforced (no sizing mode).
inline RunResult run_year(const DesignSpec& design, const AnnualWindSpec& aws, double dt_long_s,
                          const pms::ControlConfig& control, std::uint64_t seed,
                          const std::string& name = "year") {
    const auto layout = wind::two_row_layout(design.n_turbines, design.farm_spacing_d,
                                             design.turbine.rotor_diameter_m);
    auto field = wind::assemble_annual(aws.hourly_mean_mps, layout, aws.turbulence, dt_long_s, seed);
    if (aws.wake_enabled) field = wind::apply_wake(field, layout, design.turbine, aws.wake);

    Scenario sc;
    sc.name = name;
    sc.design = design;
    sc.dt_s = dt_long_s;
    sc.duration_s = field.duration_s();
    sc.field = std::move(field);
    sc.control = control;
    sc.seed = seed;
    sc.bess_sizing_mode = false;
    return run(sc);
}

/// Time of the maximal signed BESS request in the given direction (the most
/// critical instant for an N-1 event); earliest step wins ties.
inline double find_worst_instant(const RunResult& baseline, EventSpec::When direction) {
    if (baseline.trace.empty()) throw std::invalid_argument("find_worst_instant: empty trace");
    std::size_t best = 0;
    for (std::size_t i = 1; i < baseline.trace.size(); ++i) {
        const double cur = baseline.trace[i].bess_requested_mw;
        const double ref = baseline.trace[best].bess_requested_mw;
        if (direction == EventSpec::When::worst_discharge ? (cur > ref) : (cur < ref)) best = i;
    }
    return baseline.trace[best].t_s;
}

struct ContingencyResult {
    RunResult baseline;
    RunResult contingency;
    double event_time_s = 0.0;
};

/// N-1 procedure: run the scenario untouched, locate the worst charging or
/// discharging instant, then rerun with the trip injected at that instant.
inline ContingencyResult run_contingency(const Scenario& scenario, EventSpec::Kind kind,
                                         EventSpec::When direction) {
    Scenario base = scenario;
    base.events.clear();
    ContingencyResult out;
    out.baseline = run(base);
    out.event_time_s = find_worst_instant(out.baseline, direction);

    Scenario ev = scenario;
    ev.events.clear();
    ev.events.push_back({kind, EventSpec::When::at_time, out.event_time_s, -1});
    ev.name = scenario.name;
    out.contingency = run(ev);
    return out;
}

} // namespace hubsim::engine
