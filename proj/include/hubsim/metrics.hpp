#pragma once

// KPI extraction from run traces: utilization, capacity/load factors,
// longest shutdown, curtailed energy, BESS peaks, hydrogen and frequency
// statistics, plus the design-comparison table.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hubsim/record.hpp"

namespace hubsim::metrics {

/// Time fraction with P above the shutdown threshold.
inline double utilization_rate(std::span<const double> p_mw, double eps_mw = 1e-3) {
    if (p_mw.empty()) throw std::invalid_argument("utilization_rate: empty series");
    std::size_t on = 0;
    for (double p : p_mw)
        if (p > eps_mw) ++on;
    return static_cast<double>(on) / static_cast<double>(p_mw.size());
}

/// Delivered energy over rated energy for the whole period.
inline double capacity_factor(std::span<const double> p_mw, double rated_mw) {
    if (!(rated_mw > 0.0)) throw std::invalid_argument("capacity_factor: rated must be positive");
    if (p_mw.empty()) return 0.0;
    double sum = 0.0;
    for (double p : p_mw) sum += p;
    return sum / (rated_mw * static_cast<double>(p_mw.size()));
}

/// Consumed energy over rated energy for the whole period (the electrolyzer
/// convention); numerically the same computation as capacity_factor.
inline double load_factor(std::span<const double> p_mw, double rated_mw) {
    return capacity_factor(p_mw, rated_mw);
}

inline double longest_shutdown_days(std::span<const double> p_mw, double dt_s, double eps_mw = 1e-3) {
    if (p_mw.empty()) throw std::invalid_argument("longest_shutdown_days: empty series");
    std::size_t best = 0, run = 0;
    for (double p : p_mw) {
        if (p <= eps_mw) {
            ++run;
            best = std::max(best, run);
        } else {
            run = 0;
        }
    }
    return static_cast<double>(best) * dt_s / 86400.0;
}

inline double curtailed_energy_gwh(std::span<const double> avail_mw, std::span<const double> actual_mw,
                                   double dt_s) {
    if (avail_mw.size() != actual_mw.size())
        throw std::invalid_argument("curtailed_energy: series length mismatch");
    double mwh = 0.0;
    for (std::size_t i = 0; i < avail_mw.size(); ++i)
        mwh += std::max(avail_mw[i] - actual_mw[i], 0.0) * dt_s / 3600.0;
    return mwh / 1000.0;
}

struct BessPeaks {
    double max_charge_mw = 0.0;     // magnitude
    double max_discharge_mw = 0.0;  // magnitude
};

/// Extrema of the signed pre-limit BESS request. These measure the required
/// converter size, not the delivered power of the installed unit.
inline BessPeaks bess_peaks(std::span<const double> requested_mw) {
    if (requested_mw.empty()) throw std::invalid_argument("bess_peaks: empty trace");
    BessPeaks pk;
    for (double r : requested_mw) {
        pk.max_discharge_mw = std::max(pk.max_discharge_mw, r);
        pk.max_charge_mw = std::max(pk.max_charge_mw, -r);
    }
    return pk;
}

struct PlantKpis {
    double utilization_rate = 0.0;
    double longest_shutdown_days = 0.0;
    double capacity_factor = 0.0;
    double load_factor = 0.0;
};

struct KpiReport {
    PlantKpis wpp, ely, fc;
    double wind_available_gwh = 0.0;
    double curtailed_energy_gwh = 0.0;
    double curtailed_fraction = 0.0;  // of available wind energy
    double bess_max_charge_mw = 0.0;
    double bess_max_discharge_mw = 0.0;
    double soc_min_seen = 0.0;
    double soc_max_seen = 0.0;
    double soc_within_band_fraction = 0.0;  // |soc - target| <= 0.05
    double h2_net_kg = 0.0;
    double h2_min_level_kg = 0.0;
    double freq_max_abs_dev_hz = 0.0;
    double shed_energy_mwh = 0.0;
};

struct KpiInputs {
    double dt_s = 1.0;
    double wind_rating_mw = 64.0;
    double ely_rating_mw = 35.0;
    double fc_rating_mw = 35.0;
    double soc_target = 0.5;
    double soc_band = 0.05;
    double shutdown_eps_mw = 1e-3;
};

inline KpiReport compute_kpis(std::span<const StepRecord> trace, const KpiInputs& in) {
    if (trace.empty()) throw std::invalid_argument("compute_kpis: empty trace");
    const std::size_t n = trace.size();
    std::vector<double> wind(n), avail(n), ely(n), fc(n), req(n);
    KpiReport r;
    r.soc_min_seen = trace[0].soc;
    r.soc_max_seen = trace[0].soc;
    r.h2_min_level_kg = trace[0].h2_level_kg;
    std::size_t soc_in_band = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace[i];
        wind[i] = s.wind_actual_mw;
        avail[i] = s.wind_avail_mw;
        ely[i] = s.ely_p_mw;
        fc[i] = s.fc_p_mw;
        req[i] = s.bess_requested_mw;
        r.soc_min_seen = std::min(r.soc_min_seen, s.soc);
        r.soc_max_seen = std::max(r.soc_max_seen, s.soc);
        r.h2_min_level_kg = std::min(r.h2_min_level_kg, s.h2_level_kg);
        r.freq_max_abs_dev_hz = std::max(r.freq_max_abs_dev_hz, std::abs(s.freq_dev_hz));
        r.shed_energy_mwh += s.shed_mw * in.dt_s / 3600.0;
        if (std::abs(s.soc - in.soc_target) <= in.soc_band) ++soc_in_band;
    }
    r.wpp = {utilization_rate(wind, in.shutdown_eps_mw),
             longest_shutdown_days(wind, in.dt_s, in.shutdown_eps_mw),
             capacity_factor(avail, in.wind_rating_mw), 0.0};
    r.ely = {utilization_rate(ely, in.shutdown_eps_mw),
             longest_shutdown_days(ely, in.dt_s, in.shutdown_eps_mw), 0.0,
             load_factor(ely, in.ely_rating_mw)};
    r.fc = {utilization_rate(fc, in.shutdown_eps_mw),
            longest_shutdown_days(fc, in.dt_s, in.shutdown_eps_mw),
            capacity_factor(fc, in.fc_rating_mw), 0.0};
    for (std::size_t i = 0; i < n; ++i)
        r.wind_available_gwh += avail[i] * in.dt_s / 3600.0 / 1000.0;
    r.curtailed_energy_gwh = curtailed_energy_gwh(avail, wind, in.dt_s);
    r.curtailed_fraction =
        r.wind_available_gwh > 0.0 ? r.curtailed_energy_gwh / r.wind_available_gwh : 0.0;
    const auto pk = bess_peaks(req);
    r.bess_max_charge_mw = pk.max_charge_mw;
    r.bess_max_discharge_mw = pk.max_discharge_mw;
    r.soc_within_band_fraction = static_cast<double>(soc_in_band) / static_cast<double>(n);
    r.h2_net_kg = trace[n - 1].h2_level_kg - trace[0].h2_level_kg;
    return r;
}

/// KPI report as ordered key/value pairs; the summary file and kpis.csv are
/// both rendered from this list so they cannot drift apart.
inline std::vector<std::pair<std::string, double>> kpi_items(const KpiReport& r) {
    return {
        {"wpp.utilization_rate", r.wpp.utilization_rate},
        {"wpp.longest_shutdown_days", r.wpp.longest_shutdown_days},
        {"wpp.capacity_factor", r.wpp.capacity_factor},
        {"wpp.curtailed_energy_gwh", r.curtailed_energy_gwh},
        {"wpp.curtailed_fraction", r.curtailed_fraction},
        {"wpp.available_energy_gwh", r.wind_available_gwh},
        {"ely.utilization_rate", r.ely.utilization_rate},
        {"ely.longest_shutdown_days", r.ely.longest_shutdown_days},
        {"ely.load_factor", r.ely.load_factor},
        {"fc.utilization_rate", r.fc.utilization_rate},
        {"fc.longest_shutdown_days", r.fc.longest_shutdown_days},
        {"fc.capacity_factor", r.fc.capacity_factor},
        {"bess.max_charge_mw", r.bess_max_charge_mw},
        {"bess.max_discharge_mw", r.bess_max_discharge_mw},
        {"bess.soc_min", r.soc_min_seen},
        {"bess.soc_max", r.soc_max_seen},
        {"bess.soc_within_band_fraction", r.soc_within_band_fraction},
        {"h2.net_kg", r.h2_net_kg},
        {"h2.min_level_kg", r.h2_min_level_kg},
        {"freq.max_abs_dev_hz", r.freq_max_abs_dev_hz},
        {"load.shed_energy_mwh", r.shed_energy_mwh},
    };
}

/// Side-by-side comparison: one column per design, one row per KPI.
inline std::string summarize_designs(const std::vector<std::pair<std::string, KpiReport>>& designs) {
    if (designs.empty()) throw std::invalid_argument("summarize_designs: no results");
    std::vector<std::vector<std::string>> cols;
    for (const auto& [name, rep] : designs) {
        std::vector<std::string> col{name};
        for (const auto& [key, val] : kpi_items(rep)) {
            (void)key;
            col.push_back(csv::fmt(val));
        }
        cols.push_back(std::move(col));
    }
    std::vector<std::string> rows{"kpi"};
    for (const auto& [key, val] : kpi_items(designs.front().second)) {
        (void)val;
        rows.push_back(key);
    }
    std::size_t key_w = 0;
    for (const auto& k : rows) key_w = std::max(key_w, k.size());
    std::vector<std::size_t> col_w(cols.size(), 0);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& cell : cols[c]) col_w[c] = std::max(col_w[c], cell.size());

    std::ostringstream os;
    for (std::size_t rix = 0; rix < rows.size(); ++rix) {
        os << rows[rix] << std::string(key_w - rows[rix].size(), ' ');
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const auto& cell = cols[c][rix];
            os << "  " << std::string(col_w[c] - cell.size(), ' ') << cell;
        }
        os << "\n";
    }
    return os.str();
}

} // namespace hubsim::metrics
