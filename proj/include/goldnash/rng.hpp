#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace goldnash {

// SplitMix64 counter generator (Steele, Lea & Flood 2014). The state advances
// by a fixed odd constant per draw, so the k-th output is a pure function of
// (seed, k); instances generated from a seed are reproducible bit-for-bit on
// any platform with IEEE-754 doubles.
//
// Draw contract (relied on by the instance generators):
//   - uniform01() consumes one 64-bit output and returns (x >> 11) * 2^-53,
//     i.e. a double in [0, 1) built from the top 53 bits.
//   - uniform(a, b) = a + (b - a) * uniform01(), one output.
//   - normal() is the Box-Muller cosine branch and always consumes exactly
//     two outputs (no caching of the sine pair).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    // 1 - u1 keeps the argument of log strictly positive.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Seed for an independent substream: the output of the generator that a
  // SplitMix64 seeded at `base` would produce at counter position `stream`+1.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace goldnash
