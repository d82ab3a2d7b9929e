#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "hubsim/csv.hpp"
#include "hubsim/errors.hpp"

namespace hubsim {

/// One timestep of a scenario run: the full power, reactive, frequency and
/// hydrogen snapshot. bess_p_mw is the delivered (post-limit) power while
/// bess_requested_mw is the balancing request before any limiting; sizing
/// studies read the latter.
struct StepRecord {
    double t_s = 0.0;
    double wind_avail_mw = 0.0;
    double wind_actual_mw = 0.0;
    double ely_p_mw = 0.0;
    double fc_p_mw = 0.0;
    double load_p_mw = 0.0;
    double bess_p_mw = 0.0;          // signed, + discharge
    double bess_requested_mw = 0.0;  // signed, pre-limit
    double q_load_mvar = 0.0;
    double q_ely_mvar = 0.0;
    double q_afe_mvar = 0.0;
    double q_bess_mvar = 0.0;
    double soc = 0.0;
    double h2_level_kg = 0.0;
    double freq_dev_hz = 0.0;
    double curtailed_mw = 0.0;
    double shed_mw = 0.0;
    bool clipped = false;
};

inline constexpr const char* kTraceHeader =
    "t_s,wind_avail_mw,wind_actual_mw,ely_p_mw,fc_p_mw,load_p_mw,bess_p_mw,bess_requested_mw,"
    "q_load_mvar,q_ely_mvar,q_afe_mvar,q_bess_mvar,soc,h2_level_kg,freq_dev_hz,curtailed_mw,"
    "shed_mw,clipped";

inline void write_trace_csv(std::span<const StepRecord> trace, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write file: " + path);
    os << kTraceHeader << "\n";
    for (const auto& r : trace) {
        os << csv::fmt(r.t_s) << ',' << csv::fmt(r.wind_avail_mw) << ',' << csv::fmt(r.wind_actual_mw)
           << ',' << csv::fmt(r.ely_p_mw) << ',' << csv::fmt(r.fc_p_mw) << ',' << csv::fmt(r.load_p_mw)
           << ',' << csv::fmt(r.bess_p_mw) << ',' << csv::fmt(r.bess_requested_mw) << ','
           << csv::fmt(r.q_load_mvar) << ',' << csv::fmt(r.q_ely_mvar) << ',' << csv::fmt(r.q_afe_mvar)
           << ',' << csv::fmt(r.q_bess_mvar) << ',' << csv::fmt(r.soc) << ',' << csv::fmt(r.h2_level_kg)
           << ',' << csv::fmt(r.freq_dev_hz) << ',' << csv::fmt(r.curtailed_mw) << ','
           << csv::fmt(r.shed_mw) << ',' << (r.clipped ? 1 : 0) << "\n";
    }
}

} // namespace hubsim
