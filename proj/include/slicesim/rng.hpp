#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slicesim {

// splitmix64 finalizer, used to whiten substream seed material.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream purposes. Each (run, slice, purpose) triple owns an independent
// stream, so changing one slice's parameters never disturbs another slice's
// sample sequence.
enum class StreamPurpose : std::uint64_t {
    traffic = 1,
    channel = 2,
    policy = 3,
};

inline std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t run,
                                    std::uint64_t slice, StreamPurpose purpose) {
    std::uint64_t s = mix64(base_seed);
    s = mix64(s ^ (run * 0x9e3779b97f4a7c15ULL));
    s = mix64(s ^ (slice * 0xc2b2ae3d27d4eb4fULL));
    s = mix64(s ^ static_cast<std::uint64_t>(purpose));
    return s;
}

// Deterministic random stream with fixed per-call engine consumption.
// std::normal_distribution caches a second variate and its algorithm is
// implementation-defined, so the transforms are spelled out here; every
// draw consumes a fixed number of engine steps and traces replay bit-exactly.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // standard normal, Box-Muller; always consumes two engine steps
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Rayleigh(scale) by inverse CDF; one engine step
    double rayleigh(double scale) {
        const double u = uniform();
        return scale * std::sqrt(-2.0 * std::log(1.0 - u));
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace slicesim
