#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

// Per-lane LCG recurrence: state <- state * 1103515245 + 1 (mod 2^32).
inline constexpr std::uint32_t kLcgMultiplier = 1103515245u;
inline constexpr std::uint32_t kLcgIncrement = 1u;

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden64;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Folds one more stream component into a seed. Chaining mix_seed calls gives
// independent, reproducible streams keyed by (seed, a, b, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t component) {
  return splitmix64(seed ^ (kGolden64 * (component + 1)));
}

// Seed-expansion hash: a 32-bit lane seed derived from the run seed.
inline std::uint32_t expand_seed32(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  return static_cast<std::uint32_t>(mix_seed(mix_seed(mix_seed(seed, a), b), c) >> 16);
}

// Unbiased-enough bounded draw (multiply-shift); used by Fisher-Yates.
inline std::uint64_t bounded_u64(std::uint64_t r, std::uint64_t range) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * range) >> 64);
}

// Counter-based splitmix64 stream.
struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += kGolden64;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform draw in [0, range).
  std::uint64_t next_below(std::uint64_t range) { return bounded_u64(next(), range); }
};

// A bank of independent 32-bit LCG streams, one per lane. Lanes never mix.
struct LaneRng {
  std::vector<std::uint32_t> state;

  static LaneRng from_seed(std::uint64_t seed, std::uint32_t lanes) {
    LaneRng rng;
    rng.state.resize(lanes);
    for (std::uint32_t l = 0; l < lanes; ++l) {
      rng.state[l] = expand_seed32(seed, l);
    }
    return rng;
  }

  std::uint32_t lanes() const { return static_cast<std::uint32_t>(state.size()); }

  // Advance every lane exactly once.
  void step() {
    for (auto& s : state) s = s * kLcgMultiplier + kLcgIncrement;
  }

  // Advance a single lane and return its new state.
  std::uint32_t step_lane(std::uint32_t lane) {
    std::uint32_t& s = state[lane];
    s = s * kLcgMultiplier + kLcgIncrement;
    return s;
  }
};

inline LaneRng lcg_step(LaneRng rng) {
  rng.step();
  return rng;
}

// Maps a raw 32-bit state word to a vertex index in [0, n).
//
// Default path (n <= 2^23): splice the low 23 bits into a binary32 mantissa
// with exponent 0, giving f in [1,2), then truncate f*n - n toward zero.
// Larger n falls back to 64-bit modulo with bias <= n/2^32.
inline std::uint32_t lane_uniform_index(std::uint32_t state_word, std::uint32_t n) {
  if (n <= (1u << 23)) {
    const std::uint32_t bits = 0x3f800000u | (state_word & 0x7fffffu);
    float f;
    std::memcpy(&f, &bits, sizeof f);
    const double v = static_cast<double>(f) * n - n;
    return static_cast<std::uint32_t>(v);  // trunc toward zero, in [0, n)
  }
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(state_word) % n);
}

}  // namespace entropy_embed
