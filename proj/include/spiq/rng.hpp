#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spiq {

// All randomness in the library flows through this wrapper so that results
// are reproducible from a single master seed. Distribution helpers are
// hand-rolled because std::uniform_*_distribution is implementation-defined;
// mt19937_64's raw output sequence is pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  // Double in [0, 1) with 53 bits of mantissa.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Double in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool next_bool(double p) { return next_double() < p; }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Labeled sub-seed derivation: each pipeline stage (and each worker stream
// within a stage) gets an independent, reproducible seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = detail::fnv1a(label);
  h = detail::splitmix(h ^ detail::splitmix(master));
  return detail::splitmix(h ^ (0x632be59bd9b4e019ULL * (index + 1)));
}

}  // namespace spiq
