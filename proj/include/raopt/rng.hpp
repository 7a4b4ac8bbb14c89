#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace raopt {

/// Counter-based random generator (Philox4x32-10) with derived uniform,
/// normal (Box-Muller), and bounded-integer streams. Stateless per index:
/// value(seed, index) is reproducible regardless of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  /// Identifies the generator and derivations in output metadata.
  static const char* version() { return "philox4x32-10+box-muller/v1"; }

  std::uint64_t seed() const { return seed_; }

  /// Raw 4x32-bit block at `index`.
  std::array<std::uint32_t, 4> block(std::uint64_t index) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;

  /// Standard normal deviate.
  double normal(std::uint64_t index) const;

  /// Integer in [0, bound) via 128-bit multiply-shift; bound >= 1.
  std::uint64_t uniform_int(std::uint64_t index, std::uint64_t bound) const;

 private:
  std::uint64_t seed_;
};

/// Sequential facade over CounterRng for shuffle/subset sampling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t start_index = 0)
      : rng_(seed), next_(start_index) {}

  double uniform() { return rng_.uniform(next_++); }
  double normal() { return rng_.normal(next_++); }
  std::uint64_t uniform_int(std::uint64_t bound) { return rng_.uniform_int(next_++, bound); }

  /// k distinct values from [0, n), ascending. Partial Fisher-Yates.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  CounterRng rng_;
  std::uint64_t next_;
};

}  // namespace raopt
