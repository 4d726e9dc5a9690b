// rng.hpp -- counter-based random streams for reproducible parallel sampling.
//
// Every trace gets its own stream keyed by (seed, detuning index, trace index),
// so sampled data are bit-identical for a given seed no matter how the work is
// scheduled across threads.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tmt {

// Finalizer from splitmix64 (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t detuning_index,
                                       std::uint64_t trace_index) {
    std::uint64_t k = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    k = mix64(k ^ detuning_index);
    k = mix64(k ^ trace_index);
    return k;
}

// splitmix64 stream: state advances by a fixed gamma, output is a bijective mix
// of the counter, so the sequence is a pure function of (key, draw index).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform on (0, 1]: 53-bit mantissa, zero excluded so log() below is safe.
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws come in pairs.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_open_unit();
        const double u2 = next_open_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tmt
