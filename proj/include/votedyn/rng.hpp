#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace votedyn {

/// SplitMix64 finalizer; used to spread seeds before feeding them to the
/// main generator and to derive independent per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic per-stream seed from a master seed and a stream id.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x9e3779b97f4a7c15ull));
}

/// Random source with explicitly-coded variate transforms.
///
/// mt19937_64 output is pinned by the standard, and the transforms below
/// avoid the implementation-defined std::*_distribution adaptors, so a
/// given seed produces the same draw sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] by scaling; adequate for small ranges.
    long uniform_int(long lo, long hi)
    {
        if (hi < lo) throw std::domain_error("uniform_int range is empty");
        return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
    }

    /// Exponential variate with the given rate (mean 1/rate).
    double exponential(double rate)
    {
        if (!(rate > 0.0)) throw std::domain_error("exponential rate must be positive");
        return -std::log1p(-uniform()) / rate;
    }

    /// Normal variate via Box-Muller; consumes two uniforms per draw.
    double normal(double mean, double sd)
    {
        if (!(sd >= 0.0)) throw std::domain_error("normal sd must be nonnegative");
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * radius * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace votedyn
