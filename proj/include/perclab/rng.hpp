// Counter-based pseudo-randomness. Every random decision in the library is a
// pure function of (seed, stream, counter-words), so results are independent
// of evaluation order and thread count, and Bernoulli draws at different p
// share uniforms (exact monotone coupling).
#pragma once

#include <cstdint>

namespace perclab::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Finalizer of splitmix64; full-avalanche 64-bit mixer.
constexpr std::uint64_t mix(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix(h ^ (v * 0xff51afd7ed558ccdULL + kGolden + (h << 6) + (h >> 2)));
}

// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Sequential stream of draws derived from a fixed key.
class Counter {
 public:
  explicit Counter(std::uint64_t key) : key_(key) {}
  std::uint64_t next_u64() { return combine(key_, n_++); }
  double next_unit() { return to_unit(next_u64()); }
  bool bernoulli(double p) { return next_unit() < p; }
  // Uniform integer in [0, m) by rejection-free scaling (m << 2^53).
  std::uint64_t next_below(std::uint64_t m) {
    return static_cast<std::uint64_t>(next_unit() * static_cast<double>(m)) % m;
  }

 private:
  std::uint64_t key_;
  std::uint64_t n_ = 0;
};

}  // namespace perclab::rng
