#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace objbound::oracle {

/// Counter-based generator: output n of stream s under seed k is
/// splitmix64(key(k, s) + n * golden), so any draw can be reproduced from
/// (seed, stream, counter) alone and streams never share state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + kGolden))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * ++counter_); }

  std::uint64_t counter() const noexcept { return counter_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

}  // namespace objbound::oracle
