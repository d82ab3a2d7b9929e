#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hubsim {

/// Seeded PRNG (splitmix64 core). Produces the same sequence on every
/// platform, which keeps synthesized wind fields and traces bit-identical
/// across reruns of the same seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform phase in [0, 2*pi).
    double phase() { return uniform() * 2.0 * std::numbers::pi; }

    /// Standard normal (Box-Muller).
    double gaussian() {
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Independent stream seed derived from a master seed, e.g. one per
    /// 2-hour turbulence block of an annual run.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        Rng r(master ^ (0xD1B54A32D192ED03ull * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace hubsim
