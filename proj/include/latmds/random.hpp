#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace latmds::rng {

// Counter-based 64-bit generator (SplitMix64 finalizer over a keyed chain).
// Every draw is a pure function of (seed, key words), so per-edge noise and
// per-trial streams are order-independent and reproducible bit-for-bit.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t chain(std::uint64_t h, std::uint64_t word) {
  return mix64((h + kGolden) ^ word);
}

inline std::uint64_t keyed_u64(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t w : words) h = chain(h, w);
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t z) {
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a log() argument.
inline double to_unit_open(std::uint64_t z) {
  return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
}

inline double keyed_uniform(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> words) {
  return to_unit(keyed_u64(seed, words));
}

/// Standard normal via Box-Muller on two derived counters.
inline double keyed_normal(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t w : words) h = chain(h, w);
  double u1 = to_unit_open(chain(h, 0));
  double u2 = to_unit(chain(h, 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

/// Sequential stream over the same counter core, for sampling loops.
class Stream {
public:
  explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : state_(chain(mix64(seed + kGolden), stream_id)) {}

  std::uint64_t next_u64() { return chain(state_, ctr_++); }
  double uniform() { return to_unit(next_u64()); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = to_unit_open(next_u64());
    double u2 = to_unit(next_u64());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t state_;
  std::uint64_t ctr_ = 0;
};

/// Derive an independent sub-seed, e.g. one per (level, trial, attempt) cell.
inline std::uint64_t derive(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> words) {
  return keyed_u64(seed, words);
}

}  // namespace latmds::rng
