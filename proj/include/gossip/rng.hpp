#pragma once

// Deterministic random streams. Bounded draws are implemented here instead of
// going through std distributions, whose output is implementation-defined;
// everything downstream (samplers, trials, traces) is reproducible bit-for-bit
// from a 64-bit seed.

#include <cstdint>
#include <random>

namespace gossip {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for independent numbered stream `stream` under a base seed.
/// Used to give every trial (and every sweep point) its own generator.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased integer in [0, n). Lemire multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t n) {
    auto wide = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(wide);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        wide = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(wide);
      }
    }
    return static_cast<std::uint64_t>(wide >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gossip
