#pragma once

// Flat dotted-key configuration: one structured text file (`key = value`
// lines, '#' comments), overridable with repeated --set KEY=VALUE flags.
// Unknown keys are rejected; every key has a default reproducing the
// initial hub design, so an empty config is a valid full scenario.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hubsim/csv.hpp"
#include "hubsim/engine.hpp"
#include "hubsim/errors.hpp"
#include "hubsim/pms.hpp"
#include "hubsim/wind.hpp"

namespace hubsim::config {

/// Weibull scale giving the bundled synthetic year a no-curtailment farm
/// capacity factor of 0.51 with the default design, seed and turbulence
/// parameters (bisection against the assembled annual field).
inline constexpr double kCalibratedWeibullScaleMps = 10.9864;

/// The bundled reference seed used by the short-term suite and the
/// acceptance checks.
inline constexpr std::uint64_t kReferenceSeed = 7;

struct KeySpec {
    const char* key;
    const char* def;
    const char* help;
};

inline const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> s = {
        {"design.n_wind_turbines", "8", "number of wind turbines"},
        {"design.turbine_rated_mw", "8", "turbine rated power, MW"},
        {"design.turbine_cut_in_mps", "4", "cut-in wind speed, m/s"},
        {"design.turbine_rated_mps", "10", "rated wind speed, m/s"},
        {"design.turbine_cut_out_mps", "25", "cut-out wind speed, m/s"},
        {"design.turbine_rotor_diameter_m", "164", "rotor diameter, m"},
        {"design.turbine_power_lag_s", "10", "turbine power tracking time constant, s; 0 disables"},
        {"design.turbine_restart_mps", "23", "wind speed at which a cut-out turbine restarts, m/s"},
        {"design.farm_spacing_d", "5", "turbine spacing in rotor diameters"},
        {"design.n_ely_trains", "7", "electrolyzer train count"},
        {"design.ely_train_mw", "5", "electrolyzer train rating, MW"},
        {"design.ely_ramp_s", "706", "electrolyzer zero-to-full ramp time, s"},
        {"design.ely_nominal_nm3ph", "1000", "train H2 production at rated power, Nm3/h"},
        {"design.n_fc_blocks", "7", "fuel-cell block count"},
        {"design.fc_block_mw", "5", "fuel-cell block rating, MW"},
        {"design.fc_block_mva", "5", "AFE converter rating per block, MVA"},
        {"design.fc_ramp_s", "10", "fuel-cell zero-to-full ramp time, s"},
        {"design.fc_specific_kg_per_mwh", "60", "fuel-cell H2 consumption, kg/MWh"},
        {"design.bess_mw", "10", "BESS power rating, MW"},
        {"design.bess_mwh", "10", "BESS energy capacity, MWh"},
        {"design.bess_mva", "20", "BESS converter rating, MVA"},
        {"design.bess_soc0", "0.5", "initial state of charge"},
        {"design.bess_soc_min", "0", "SOC floor"},
        {"design.bess_soc_max", "1", "SOC ceiling"},
        {"design.bess_efficiency", "1.0", "round-trip efficiency"},
        {"design.tank_capacity_kg", "-1", "H2 tank capacity, kg; negative = unbounded net tracking"},
        {"design.tank_initial_kg", "0", "initial H2 inventory, kg"},
        {"design.n_loads_large", "2", "count of large platforms"},
        {"design.load_large_mw", "5.75", "large platform demand, MW"},
        {"design.n_loads_small", "4", "count of small platforms"},
        {"design.load_small_mw", "4", "small platform demand, MW"},
        {"design.load_pf", "0.8", "platform power factor"},
        {"wind.mean_mps", "10", "short-term mean wind speed, m/s"},
        {"wind.ti", "0.12", "turbulence intensity"},
        {"wind.length_scale_m", "600", "turbulence integral length scale, m"},
        {"wind.coherence_decay", "12", "exponential coherence decay constant"},
        {"wind.rotor_cutoff_hz", "0.10", "rotor-averaging low-pass cutoff, Hz; 0 disables"},
        {"wind.wake_enabled", "false", "apply wake deficits to short-term fields"},
        {"wind.wake_ct", "0.8", "wake thrust coefficient"},
        {"wind.wake_k", "0.05", "wake expansion constant"},
        {"wind.field_csv", "", "import a short-term wind field instead of synthesizing"},
        {"wind.annual_csv", "", "hourly mean-wind CSV for year runs; empty = bundled synthetic"},
        {"wind.annual_wake_enabled", "false", "apply wake deficits to annual fields"},
        {"wind.annual_ntm_iref", "0.08", "IEC NTM reference intensity for annual blocks; 0 = fixed TI"},
        {"wind.annual_sigma_cap_mps", "0.55", "cap on annual block sigma, m/s; 0 = uncapped"},
        {"wind.weibull_shape", "2.0", "synthetic year Weibull shape"},
        {"wind.weibull_scale_mps", "10.9864", "synthetic year Weibull scale, m/s (calibrated)"},
        {"wind.ar1_corr_time_h", "36", "synthetic year AR(1) correlation time, h"},
        {"control.soc_target", "0.5", "SOC regulation target"},
        {"control.soc_gain_mw", "40", "SOC regulation gain, MW per unit SOC error"},
        {"control.soc_bias_cap_mw", "5", "SOC regulation bias cap, MW"},
        {"control.ely_allocation", "sequence", "electrolyzer allocation: sequence | synchronized"},
        {"control.freq_droop", "0.04", "frequency droop, p.u."},
        {"control.freq_lag_s", "2", "frequency proxy lag (inertia), s"},
        {"control.hysteresis_mw", "0.5", "surplus/deficit mode hysteresis, MW"},
        {"control.reconnect_hold_s", "600", "hold-off before shed loads reconnect, s"},
        {"control.reconnect_margin_mw", "1", "supply margin required to reconnect a shed load, MW"},
        {"control.ely_pf_low", "0.5", "rectifier power factor below the knee"},
        {"control.ely_pf_full", "0.9", "rectifier power factor at full load"},
        {"control.ely_pf_knee", "0.1", "rectifier power-factor knee loading"},
        {"scenario.name", "run", "output subdirectory name"},
        {"scenario.dt_s", "1", "short-term timestep, s"},
        {"scenario.duration_s", "7200", "short-term run duration, s"},
        {"scenario.annual_dt_s", "60", "year-run timestep, s"},
        {"scenario.seed", "7", "realization seed"},
        {"scenario.sizing_mode", "true", "BESS delivers the full request (sizing studies)"},
        {"scenario.event", "none",
         "none | wt_trip@worst_discharge | load_trip@worst_charge | wt_trip@T | load_trip@T"},
        {"output.dir", "out", "output directory"},
        {"output.wind_csv", "false", "also export the wind field used by the run"},
    };
    return s;
}

class Config {
public:
    Config() {
        for (const auto& k : schema()) values_[k.key] = k.def;
    }

    static Config from_file(const std::string& path) {
        Config cfg;
        const auto lines = csv::read_lines(path);
        for (std::size_t i = 0; i < lines.size(); ++i)
            cfg.apply_line(lines[i], path + ":" + std::to_string(i + 1));
        return cfg;
    }

    static Config from_text(const std::string& text) {
        Config cfg;
        std::istringstream is(text);
        std::string line;
        std::size_t n = 0;
        while (std::getline(is, line)) cfg.apply_line(line, "line " + std::to_string(++n));
        return cfg;
    }

    void set(const std::string& key, const std::string& value) {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown config key: " + key);
        it->second = value;
    }

    /// Apply one "key=value" override (the --set flag).
    void apply_override(const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be KEY=VALUE: " + kv);
        set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }

    const std::string& raw(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown config key: " + key);
        return it->second;
    }

    double get_double(const std::string& key) const { return csv::parse_double(raw(key), key); }

    int get_int(const std::string& key) const {
        const double v = get_double(key);
        const int i = static_cast<int>(std::llround(v));
        if (std::abs(v - i) > 1e-9) throw ConfigError(key + ": expected an integer, got " + raw(key));
        return i;
    }

    std::uint64_t get_seed(const std::string& key) const {
        try {
            return static_cast<std::uint64_t>(std::stoull(raw(key)));
        } catch (const std::exception&) {
            throw ConfigError(key + ": expected a non-negative integer, got " + raw(key));
        }
    }

    bool get_bool(const std::string& key) const {
        const auto& v = raw(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError(key + ": expected true or false, got " + v);
    }

    /// Re-parseable echo of the effective configuration, sorted by key.
    std::string echo() const {
        std::ostringstream os;
        for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
        return os.str();
    }

    bool operator==(const Config& other) const { return values_ == other.values_; }

private:
    static std::string trim(std::string s) {
        const auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!s.empty() && issp(s.front())) s.erase(s.begin());
        while (!s.empty() && issp(s.back())) s.pop_back();
        return s;
    }

    void apply_line(const std::string& raw_line, const std::string& where) {
        std::string line = raw_line;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) return;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            set(key, val);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }

    std::map<std::string, std::string> values_;
};

inline engine::DesignSpec design_from(const Config& c) {
    engine::DesignSpec d;
    d.turbine.rated_power_mw = c.get_double("design.turbine_rated_mw");
    d.turbine.cut_in_mps = c.get_double("design.turbine_cut_in_mps");
    d.turbine.rated_speed_mps = c.get_double("design.turbine_rated_mps");
    d.turbine.cut_out_mps = c.get_double("design.turbine_cut_out_mps");
    d.turbine.rotor_diameter_m = c.get_double("design.turbine_rotor_diameter_m");
    d.wind_power_lag_s = c.get_double("design.turbine_power_lag_s");
    d.storm_restart_mps = c.get_double("design.turbine_restart_mps");
    const int n_wt = c.get_int("design.n_wind_turbines");
    if (n_wt <= 0) throw ConfigError("design.n_wind_turbines must be positive");
    d.n_turbines = static_cast<std::size_t>(n_wt);
    d.farm_spacing_d = c.get_double("design.farm_spacing_d");
    d.n_ely_trains = c.get_int("design.n_ely_trains");
    d.ely_train_mw = c.get_double("design.ely_train_mw");
    d.ely_ramp_time_s = c.get_double("design.ely_ramp_s");
    d.ely_nominal_nm3ph = c.get_double("design.ely_nominal_nm3ph");
    d.n_fc_blocks = c.get_int("design.n_fc_blocks");
    d.fc_block_mw = c.get_double("design.fc_block_mw");
    d.fc_block_mva = c.get_double("design.fc_block_mva");
    d.fc_ramp_time_s = c.get_double("design.fc_ramp_s");
    d.fc_specific_kg_per_mwh = c.get_double("design.fc_specific_kg_per_mwh");
    d.bess.power_rating_mw = c.get_double("design.bess_mw");
    d.bess.energy_capacity_mwh = c.get_double("design.bess_mwh");
    d.bess.apparent_rating_mva = c.get_double("design.bess_mva");
    d.bess.soc = c.get_double("design.bess_soc0");
    d.bess.soc_min = c.get_double("design.bess_soc_min");
    d.bess.soc_max = c.get_double("design.bess_soc_max");
    d.bess.round_trip_efficiency = c.get_double("design.bess_efficiency");
    d.tank_capacity_kg = c.get_double("design.tank_capacity_kg");
    d.tank_initial_kg = c.get_double("design.tank_initial_kg");

    d.platforms.clear();
    const int n_large = c.get_int("design.n_loads_large");
    const int n_small = c.get_int("design.n_loads_small");
    if (n_large < 0 || n_small < 0) throw ConfigError("design: platform counts must be >= 0");
    const double pf = c.get_double("design.load_pf");
    for (int i = 0; i < n_large; ++i)
        d.platforms.push_back({c.get_double("design.load_large_mw"), pf, 2, true});
    for (int i = 0; i < n_small; ++i)
        d.platforms.push_back({c.get_double("design.load_small_mw"), pf, 1, true});
    d.validate();
    return d;
}

inline pms::ControlConfig control_from(const Config& c) {
    pms::ControlConfig cc;
    cc.soc_target = c.get_double("control.soc_target");
    cc.soc_gain_mw_per_unit = c.get_double("control.soc_gain_mw");
    cc.soc_bias_cap_mw = c.get_double("control.soc_bias_cap_mw");
    const auto& alloc = c.raw("control.ely_allocation");
    if (alloc == "sequence") {
        cc.ely_allocation = pms::Allocation::sequence;
    } else if (alloc == "synchronized") {
        cc.ely_allocation = pms::Allocation::synchronized;
    } else {
        throw ConfigError("control.ely_allocation must be sequence or synchronized");
    }
    cc.fc_allocation = pms::Allocation::sequence;
    cc.freq_droop_pu = c.get_double("control.freq_droop");
    cc.freq_lag_s = c.get_double("control.freq_lag_s");
    cc.mode_hysteresis_mw = c.get_double("control.hysteresis_mw");
    cc.reconnect_hold_s = c.get_double("control.reconnect_hold_s");
    cc.reconnect_margin_mw = c.get_double("control.reconnect_margin_mw");
    cc.ely_pf_low = c.get_double("control.ely_pf_low");
    cc.ely_pf_full = c.get_double("control.ely_pf_full");
    cc.ely_pf_knee_load = c.get_double("control.ely_pf_knee");
    cc.validate();
    return cc;
}

inline wind::TurbulenceSpec turbulence_from(const Config& c) {
    wind::TurbulenceSpec t;
    t.mean_speed_mps = c.get_double("wind.mean_mps");
    t.turbulence_intensity = c.get_double("wind.ti");
    t.length_scale_m = c.get_double("wind.length_scale_m");
    t.coherence_decay = c.get_double("wind.coherence_decay");
    t.rotor_cutoff_hz = c.get_double("wind.rotor_cutoff_hz");
    t.seed = c.get_seed("scenario.seed");
    t.validate();
    return t;
}

inline wind::WakeParams wake_from(const Config& c, bool annual) {
    wind::WakeParams w;
    w.enabled = c.get_bool(annual ? "wind.annual_wake_enabled" : "wind.wake_enabled");
    w.thrust_coefficient = c.get_double("wind.wake_ct");
    w.decay = c.get_double("wind.wake_k");
    if (w.enabled) w.validate();
    return w;
}

} // namespace hubsim::config
