#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qaf {

/// Deterministic random stream with portable sampling primitives.
///
/// All stochastic components draw from streams created by `substream`,
/// so a single master seed reproduces every run bit-for-bit regardless
/// of worker count. The raw engine is std::mt19937_64 (standardized
/// output sequence); uniform/normal variates are derived here instead
/// of through std::*_distribution, whose output is
/// implementation-defined.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound), bound > 0, via rejection.
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Standard normal via Box-Muller (two uniforms per draw).
    double normal();

    std::string serialize() const;
    static RngStream deserialize(const std::string& text);

  private:
    std::mt19937_64 engine_;
};

/// Mixes a master seed with a stream label and up to three indices into
/// an independent substream seed (splitmix64 finalizer over the path).
std::uint64_t mix_seed(std::uint64_t master, std::string_view label, std::uint64_t a = 0,
                       std::uint64_t b = 0, std::uint64_t c = 0);

inline RngStream substream(std::uint64_t master, std::string_view label, std::uint64_t a = 0,
                           std::uint64_t b = 0, std::uint64_t c = 0) {
    return RngStream(mix_seed(master, label, a, b, c));
}

}  // namespace qaf
