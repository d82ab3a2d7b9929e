#pragma once

// Wind input chain for the hub simulator: correlated per-turbine turbulence
// (spectral method with Kaimal PSD and exponential coherence), quasi-steady
// power curve, top-hat wake deficits, farm-level curtailment dispatch and
// year-long assembly of 2-hour blocks from hourly mean winds.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hubsim/csv.hpp"
#include "hubsim/errors.hpp"
#include "hubsim/fft.hpp"
#include "hubsim/rng.hpp"

namespace hubsim::wind {

inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr double kBlockSeconds = 7200.0;  // annual runs assemble 2-hour blocks
inline constexpr double kFadeSeconds = 60.0;     // cross-fade of the turbulence realizations
inline constexpr double kMeanRampSeconds = 600.0;  // mean-level transition around block joins

struct TurbineSpec {
    double rated_power_mw = 8.0;
    double cut_in_mps = 4.0;
    double rated_speed_mps = 10.0;
    double cut_out_mps = 25.0;
    double rotor_diameter_m = 164.0;

    void validate() const {
        if (!(rated_power_mw > 0.0)) throw ConfigError("turbine: rated power must be positive");
        if (!(0.0 < cut_in_mps && cut_in_mps < rated_speed_mps && rated_speed_mps < cut_out_mps))
            throw ConfigError("turbine: require 0 < cut_in < rated_speed < cut_out");
        if (!(rotor_diameter_m > 0.0)) throw ConfigError("turbine: rotor diameter must be positive");
    }
};

struct FarmLayout {
    std::vector<std::array<double, 2>> positions;  // meters; x along the wind, y across

    std::size_t n_turbines() const { return positions.size(); }

    void validate(double rotor_diameter_m) const {
        for (std::size_t i = 0; i < positions.size(); ++i)
            for (std::size_t j = i + 1; j < positions.size(); ++j) {
                const double dx = positions[i][0] - positions[j][0];
                const double dy = positions[i][1] - positions[j][1];
                const double d = std::hypot(dx, dy);
                if (d < rotor_diameter_m)
                    throw ConfigError("layout: turbines closer than one rotor diameter");
            }
    }
};

/// Default farm geometry: two rows with `spacing_d` diameters between
/// neighbors in both directions. Turbines fill row-major, four per row for
/// the 8-turbine base system.
inline FarmLayout two_row_layout(std::size_t n, double spacing_d, double rotor_diameter_m) {
    if (n == 0) throw ConfigError("layout: need at least one turbine");
    FarmLayout lay;
    const double s = spacing_d * rotor_diameter_m;
    const std::size_t per_row = (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row = i / per_row;
        const std::size_t col = i % per_row;
        lay.positions.push_back({static_cast<double>(col) * s, static_cast<double>(row) * s});
    }
    return lay;
}

struct TurbulenceSpec {
    double mean_speed_mps = 10.0;
    double turbulence_intensity = 0.12;
    double length_scale_m = 600.0;   // Kaimal integral length scale
    double coherence_decay = 12.0;   // exponential coherence decay constant
    double rotor_cutoff_hz = 0.10;   // rotor-averaging low-pass; 0 disables
    /// When > 0, annual assembly derives each block's TI from the IEC
    /// normal-turbulence law sigma = iref*(0.75*V + 5.6) instead of the
    /// fixed turbulence_intensity. Low-wind blocks get realistically wide
    /// spreads this way.
    double ntm_iref = 0.0;
    /// Upper bound on the NTM block sigma; rotor and farm aggregation keep
    /// absolute block-scale gusts from growing linearly with mean speed.
    double ntm_sigma_cap_mps = 0.55;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(mean_speed_mps >= 0.0)) throw ConfigError("turbulence: mean speed must be >= 0");
        if (!(turbulence_intensity >= 0.0 && turbulence_intensity < 1.0))
            throw ConfigError("turbulence: TI must be in [0, 1)");
        if (!(length_scale_m > 0.0)) throw ConfigError("turbulence: length scale must be positive");
        if (!(coherence_decay >= 0.0)) throw ConfigError("turbulence: coherence decay must be >= 0");
        if (!(rotor_cutoff_hz >= 0.0)) throw ConfigError("turbulence: rotor cutoff must be >= 0");
    }
};

/// Rotor-averaged wind speed per turbine, fixed step. Immutable after
/// synthesis; scenario runs share fields read-only.
struct WindField {
    double dt_s = 1.0;
    std::size_t n_turbines = 0;
    std::size_t n_steps = 0;
    std::vector<double> speeds;  // [turbine][step], row-major

    double speed(std::size_t turbine, std::size_t step) const {
        return speeds[turbine * n_steps + step];
    }
    double& speed(std::size_t turbine, std::size_t step) {
        return speeds[turbine * n_steps + step];
    }
    double duration_s() const { return dt_s * static_cast<double>(n_steps); }
};

/// Kaimal-form PSD of the longitudinal wind speed, (m/s)^2 per Hz.
inline double kaimal_psd(double f_hz, double mean_speed_mps, double sigma_mps, double length_scale_m) {
    if (mean_speed_mps <= 0.0 || f_hz <= 0.0) return 0.0;
    const double lv = length_scale_m / mean_speed_mps;
    return sigma_mps * sigma_mps * 4.0 * lv / std::pow(1.0 + 6.0 * f_hz * lv, 5.0 / 3.0);
}

/// Quasi-steady power curve: zero below cut-in and at/above cut-out, rated
/// on [rated_speed, cut_out), cubic interpolation in between.
inline double power_curve(double v_mps, const TurbineSpec& spec) {
    if (!(v_mps >= 0.0)) throw std::invalid_argument("power_curve: wind speed must be >= 0");
    if (v_mps < spec.cut_in_mps || v_mps >= spec.cut_out_mps) return 0.0;
    if (v_mps >= spec.rated_speed_mps) return spec.rated_power_mw;
    const double c0 = spec.cut_in_mps * spec.cut_in_mps * spec.cut_in_mps;
    const double cr = spec.rated_speed_mps * spec.rated_speed_mps * spec.rated_speed_mps;
    const double cv = v_mps * v_mps * v_mps;
    return spec.rated_power_mw * (cv - c0) / (cr - c0);
}

namespace detail {

/// In-place lower Cholesky factor of a symmetric positive-definite matrix
/// (row-major n x n). The upper triangle is zeroed.
inline void cholesky_lower(std::vector<double>& m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
            if (i == j) {
                m[i * n + i] = std::sqrt(std::max(s, 1e-300));
            } else {
                m[i * n + j] = s / m[j * n + j];
            }
        }
        for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = 0.0;
    }
}

} // namespace detail

/// Multivariate spectral synthesis of per-turbine rotor-averaged wind.
/// Deterministic for a fixed seed. Each frequency line carries a Kaimal
/// amplitude shaped by a rotor-averaging low-pass, distributed over turbines
/// through the Cholesky factor of the exponential coherence matrix; the
/// amplitude set is normalized so every turbine's variance is (TI*V)^2.
inline WindField synthesize_wind_field(const FarmLayout& layout, const TurbulenceSpec& turb,
                                       double dt_s, double duration_s) {
    turb.validate();
    if (!(dt_s > 0.0)) throw ConfigError("synthesize_wind_field: dt must be positive");
    if (!(duration_s >= dt_s)) throw ConfigError("synthesize_wind_field: duration shorter than one step");
    const std::size_t n = layout.n_turbines();
    if (n == 0) throw ConfigError("synthesize_wind_field: empty layout");

    const auto n_steps = static_cast<std::size_t>(std::llround(duration_s / dt_s));
    WindField field{dt_s, n, n_steps, std::vector<double>(n * n_steps, turb.mean_speed_mps)};

    const double vbar = turb.mean_speed_mps;
    const double sigma = turb.turbulence_intensity * vbar;
    if (sigma <= 0.0) return field;

    const std::size_t nfft = std::max<std::size_t>(next_pow2(n_steps), 8);
    const std::size_t n_freq = nfft / 2;
    const double df = 1.0 / (static_cast<double>(nfft) * dt_s);

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = layout.positions[i][0] - layout.positions[j][0];
            const double dy = layout.positions[i][1] - layout.positions[j][1];
            dist[i * n + j] = std::hypot(dx, dy);
        }

    Rng rng(turb.seed);
    std::vector<std::complex<double>> coeff(n * n_freq, {0.0, 0.0});
    std::vector<double> corr(n * n);
    std::vector<std::complex<double>> unit(n);
    double var_sum = 0.0;

    for (std::size_t m = 1; m < n_freq; ++m) {
        const double f = static_cast<double>(m) * df;
        double amp2 = 2.0 * kaimal_psd(f, vbar, sigma, turb.length_scale_m) * df;
        if (turb.rotor_cutoff_hz > 0.0) {
            const double r = f / turb.rotor_cutoff_hz;
            amp2 /= 1.0 + r * r * r * r;
        }
        const double amp = std::sqrt(amp2);
        var_sum += 0.5 * amp2;

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                corr[i * n + j] = (i == j)
                    ? 1.0 + 1e-12
                    : std::exp(-turb.coherence_decay * f * dist[i * n + j] / vbar);
        detail::cholesky_lower(corr, n);

        for (std::size_t k = 0; k < n; ++k) {
            const double ph = rng.phase();
            unit[k] = {std::cos(ph), std::sin(ph)};
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t k = 0; k <= j; ++k) s += corr[j * n + k] * unit[k];
            coeff[j * n_freq + m] = amp * s;
        }
    }

    if (var_sum <= 0.0) return field;
    const double scale = sigma / std::sqrt(var_sum) * static_cast<double>(nfft) / 2.0;

    std::vector<std::complex<double>> spec(nfft);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(spec.begin(), spec.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t m = 1; m < n_freq; ++m) {
            const auto c = coeff[j * n_freq + m] * scale;
            spec[m] = c;
            spec[nfft - m] = std::conj(c);
        }
        fft_radix2(spec, true);
        for (std::size_t t = 0; t < n_steps; ++t)
            field.speed(j, t) = std::max(0.0, vbar + spec[t].real());
    }
    return field;
}

struct WakeParams {
    bool enabled = true;
    double thrust_coefficient = 0.8;
    double decay = 0.05;  // wake expansion per meter downstream over rotor radius

    void validate() const {
        if (!(thrust_coefficient >= 0.0 && thrust_coefficient < 1.0))
            throw ConfigError("wake: thrust coefficient must be in [0, 1)");
        if (!(decay >= 0.0)) throw ConfigError("wake: decay must be >= 0");
    }
};

/// Top-hat wake deficits along +x (the fixed along-row wind direction).
/// A turbine inside the expanded wake cone of an upstream machine sees its
/// speed reduced by the root-sum-square of the individual deficits. Never
/// increases any sample; turbines with no upstream source are unchanged.
inline WindField apply_wake(const WindField& field, const FarmLayout& layout,
                            const TurbineSpec& spec, const WakeParams& wake = {}) {
    if (field.n_turbines != layout.n_turbines())
        throw ConfigError("apply_wake: field and layout turbine counts differ");
    if (!wake.enabled) return field;
    wake.validate();

    const double radius = 0.5 * spec.rotor_diameter_m;
    const double a = 1.0 - std::sqrt(1.0 - wake.thrust_coefficient);
    const std::size_t n = field.n_turbines;

    std::vector<double> factor(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const double dx = layout.positions[j][0] - layout.positions[i][0];
            if (dx <= 0.0) continue;
            const double dy = std::abs(layout.positions[j][1] - layout.positions[i][1]);
            const double wake_radius = radius + wake.decay * dx;
            if (dy > wake_radius) continue;
            const double denom = 1.0 + wake.decay * dx / radius;
            const double deficit = a / (denom * denom);
            sum_sq += deficit * deficit;
        }
        factor[j] = std::max(0.0, 1.0 - std::sqrt(sum_sq));
    }

    WindField out = field;
    for (std::size_t j = 0; j < n; ++j) {
        if (factor[j] >= 1.0) continue;
        for (std::size_t t = 0; t < out.n_steps; ++t) out.speed(j, t) *= factor[j];
    }
    return out;
}

struct FarmPower {
    double total_mw = 0.0;
    std::vector<double> per_turbine_mw;
};

inline FarmPower available_farm_power(const WindField& field, const TurbineSpec& spec,
                                      std::size_t t_index) {
    if (t_index >= field.n_steps) throw std::out_of_range("available_farm_power: step index out of range");
    FarmPower fp;
    fp.per_turbine_mw.resize(field.n_turbines);
    for (std::size_t j = 0; j < field.n_turbines; ++j) {
        fp.per_turbine_mw[j] = power_curve(field.speed(j, t_index), spec);
        fp.total_mw += fp.per_turbine_mw[j];
    }
    return fp;
}

/// Plant-controller setpoint split: proportional-to-available allocation.
/// The sum equals min(farm_setpoint, total available) and no turbine is
/// asked for more than it has.
inline std::vector<double> distribute_curtailment(double farm_setpoint_mw,
                                                  const std::vector<double>& per_turbine_available_mw) {
    if (!(farm_setpoint_mw >= 0.0))
        throw std::invalid_argument("distribute_curtailment: setpoint must be >= 0");
    double total = 0.0;
    for (double a : per_turbine_available_mw) total += std::max(a, 0.0);
    std::vector<double> out(per_turbine_available_mw.size(), 0.0);
    if (total <= 0.0) return out;
    const double frac = std::min(1.0, farm_setpoint_mw / total);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::max(per_turbine_available_mw[i], 0.0) * frac;
    return out;
}

/// Assemble a year of wind at dt_s from hourly mean speeds: one synthesized
/// 2-hour block per pair of hours. Turbulence realizations are joined with
/// a 60 s linear cross-fade; the mean level itself transitions over a
/// 15-minute window around each join, the time scale on which weather
/// states actually evolve, so assembled years carry no artificial cliffs.
/// Block seeds derive from the master seed, so the year is reproducible.
inline WindField assemble_annual(const std::vector<double>& hourly_mean_mps, const FarmLayout& layout,
                                 const TurbulenceSpec& base, double dt_s, std::uint64_t seed) {
    if (hourly_mean_mps.size() < kHoursPerYear)
        throw ConfigError("assemble_annual: need " + std::to_string(kHoursPerYear) + " hourly mean speeds");
    if (!(dt_s > 0.0)) throw ConfigError("assemble_annual: dt must be positive");
    const double steps_per_block_f = kBlockSeconds / dt_s;
    if (std::abs(steps_per_block_f - std::round(steps_per_block_f)) > 1e-9 || steps_per_block_f < 2.0)
        throw ConfigError("assemble_annual: dt must divide the 7200 s block length");

    const auto steps_block = static_cast<std::size_t>(std::llround(steps_per_block_f));
    const std::size_t n_blocks = kHoursPerYear / 2;
    const auto fade_steps = std::min<std::size_t>(
        steps_block / 2, static_cast<std::size_t>(std::llround(kFadeSeconds / dt_s)));
    const std::size_t n = layout.n_turbines();

    std::vector<double> block_mean(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b)
        block_mean[b] = 0.5 * (hourly_mean_mps[2 * b] + hourly_mean_mps[2 * b + 1]);

    // mean level at an absolute time: the block mean in the core, a linear
    // transition across half the ramp window on each side of a join
    const double half_ramp = std::min(0.5 * kMeanRampSeconds, 0.25 * kBlockSeconds);
    auto mean_at = [&](std::size_t b, double t_in_block) {
        if (b > 0 && t_in_block < half_ramp) {
            const double w = 0.5 + 0.5 * t_in_block / half_ramp;
            return block_mean[b - 1] + (block_mean[b] - block_mean[b - 1]) * w;
        }
        const double t_to_end = kBlockSeconds - t_in_block;
        if (b + 1 < n_blocks && t_to_end < half_ramp) {
            const double w = 0.5 + 0.5 * t_to_end / half_ramp;
            return block_mean[b + 1] + (block_mean[b] - block_mean[b + 1]) * w;
        }
        return block_mean[b];
    };

    WindField out{dt_s, n, n_blocks * steps_block, {}};
    out.speeds.assign(n * out.n_steps, 0.0);

    std::vector<double> prev_tail(n * fade_steps, 0.0);  // fluctuation tails
    for (std::size_t b = 0; b < n_blocks; ++b) {
        TurbulenceSpec tb = base;
        tb.mean_speed_mps = block_mean[b];
        if (base.ntm_iref > 0.0 && tb.mean_speed_mps > 0.5) {
            double sigma = base.ntm_iref * (0.75 * tb.mean_speed_mps + 5.6);
            if (base.ntm_sigma_cap_mps > 0.0) sigma = std::min(sigma, base.ntm_sigma_cap_mps);
            tb.turbulence_intensity = std::min(0.5, sigma / tb.mean_speed_mps);
        }
        tb.ntm_iref = 0.0;
        tb.seed = Rng::derive(seed, b);
        const double dur = static_cast<double>(steps_block + fade_steps) * dt_s;
        const WindField blk = synthesize_wind_field(layout, tb, dt_s, dur);

        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t t = 0; t < steps_block; ++t) {
                double fluct = blk.speed(j, t) - block_mean[b];
                if (b > 0 && t < fade_steps) {
                    const double w = static_cast<double>(t + 1) / static_cast<double>(fade_steps + 1);
                    fluct = (1.0 - w) * prev_tail[j * fade_steps + t] + w * fluct;
                }
                const double m = mean_at(b, static_cast<double>(t) * dt_s);
                out.speed(j, b * steps_block + t) = std::max(0.0, m + fluct);
            }
            for (std::size_t t = 0; t < fade_steps; ++t)
                prev_tail[j * fade_steps + t] = blk.speed(j, steps_block + t) - block_mean[b];
        }
    }
    return out;
}

struct WeibullYearSpec {
    double shape = 2.0;
    double scale_mps = 10.0;
    double corr_time_h = 36.0;  // AR(1) decorrelation time of the hourly means
    std::uint64_t seed = 1;
};

/// Synthetic hourly mean-wind year: AR(1) Gaussian process mapped through
/// the Weibull quantile transform, so the marginal is Weibull(shape, scale)
/// while calm and storm periods persist over synoptic time scales.
inline std::vector<double> weibull_year(const WeibullYearSpec& w) {
    if (!(w.shape > 0.0) || !(w.scale_mps >= 0.0) || !(w.corr_time_h > 0.0))
        throw ConfigError("weibull_year: invalid parameters");
    Rng rng(w.seed);
    const double rho = std::exp(-1.0 / w.corr_time_h);
    const double innov = std::sqrt(1.0 - rho * rho);
    std::vector<double> out(kHoursPerYear);
    double g = rng.gaussian();
    for (std::size_t h = 0; h < kHoursPerYear; ++h) {
        if (h > 0) g = rho * g + innov * rng.gaussian();
        double u = 0.5 * std::erfc(g / std::numbers::sqrt2);  // survival, uniform in (0,1)
        u = std::clamp(u, 1e-15, 1.0 - 1e-15);
        out[h] = w.scale_mps * std::pow(-std::log(u), 1.0 / w.shape);
    }
    return out;
}

inline void write_field_csv(const WindField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write file: " + path);
    os << "t_s";
    for (std::size_t j = 0; j < field.n_turbines; ++j) os << ",wt" << (j + 1) << "_mps";
    os << "\n";
    for (std::size_t t = 0; t < field.n_steps; ++t) {
        os << csv::fmt(static_cast<double>(t) * field.dt_s);
        for (std::size_t j = 0; j < field.n_turbines; ++j) os << ',' << csv::fmt(field.speed(j, t));
        os << "\n";
    }
}

inline WindField read_field_csv(const std::string& path) {
    const auto lines = csv::read_lines(path);
    if (lines.size() < 3) throw ConfigError(path + ": wind field needs a header and at least two rows");
    const auto header = csv::split(lines[0]);
    if (header.size() < 2 || header[0] != "t_s")
        throw ConfigError(path + ": expected header t_s,wt1_mps,...");
    const std::size_t n = header.size() - 1;

    WindField field;
    field.n_turbines = n;
    field.n_steps = lines.size() - 1;
    field.speeds.assign(n * field.n_steps, 0.0);
    double t0 = 0.0, t1 = 0.0;
    for (std::size_t r = 0; r + 1 < lines.size(); ++r) {
        const auto cells = csv::split(lines[r + 1]);
        if (cells.size() != header.size())
            throw ConfigError(path + ": row " + std::to_string(r + 2) + " has wrong column count");
        const double t = csv::parse_double(cells[0], path);
        if (r == 0) t0 = t;
        if (r == 1) t1 = t;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = csv::parse_double(cells[j + 1], path);
            if (!(v >= 0.0)) throw ConfigError(path + ": negative wind speed");
            field.speeds[j * field.n_steps + r] = v;
        }
    }
    field.dt_s = t1 - t0;
    if (!(field.dt_s > 0.0)) throw ConfigError(path + ": time column must be increasing");
    return field;
}

inline void write_annual_csv(const std::vector<double>& hourly_mean_mps, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write file: " + path);
    os << "hour,mean_mps\n";
    for (std::size_t h = 0; h < hourly_mean_mps.size(); ++h)
        os << h << ',' << csv::fmt(hourly_mean_mps[h]) << "\n";
}

inline std::vector<double> read_annual_csv(const std::string& path) {
    const auto lines = csv::read_lines(path);
    if (lines.size() < kHoursPerYear + 1)
        throw ConfigError(path + ": annual input needs header plus 8760 rows");
    const auto header = csv::split(lines[0]);
    if (header.size() != 2 || header[0] != "hour" || header[1] != "mean_mps")
        throw ConfigError(path + ": expected header hour,mean_mps");
    std::vector<double> out;
    out.reserve(kHoursPerYear);
    for (std::size_t h = 0; h < kHoursPerYear; ++h) {
        const auto cells = csv::split(lines[h + 1]);
        if (cells.size() != 2) throw ConfigError(path + ": row " + std::to_string(h + 2) + " malformed");
        const double v = csv::parse_double(cells[1], path);
        if (!(v >= 0.0)) throw ConfigError(path + ": negative mean wind speed");
        out.push_back(v);
    }
    return out;
}

} // namespace hubsim::wind
