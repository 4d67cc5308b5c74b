#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace seqtest {

// One SplitMix64 output for the stream seeded at `state` (Steele et al. 2014).
// The additive constant is the 64-bit golden gamma, so splitmix64(base + i * kGoldenGamma)
// walks the i-th element of the stream rooted at `base`.
inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for the `index`-th child stream of `base_seed`. Used to derive per-replication
// and per-grid-cell streams so results do not depend on scheduling order.
constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + index * kGoldenGamma);
}

// Deterministic random stream: a mt19937_64 engine (bit-stable per the standard)
// plus explicit double / integer / normal converters, so draws are identical
// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool fair_coin() { return (next_u64() >> 63) != 0; }

  // Unbiased uniform integer in [0, n); rejection sampling on the top range.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = next_u64();
      r = x % n;
    } while (x - r > std::uint64_t(-1) - (n - 1));
    return r;
  }

  // Standard normal deviate via Box-Muller; the paired deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace seqtest
