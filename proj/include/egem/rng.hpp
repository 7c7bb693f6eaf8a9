#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace egem {

/// Mixes a seed with any number of stream identifiers into a new 64-bit key.
/// Used to give every (replicate, purpose, start, ...) its own stream so that
/// results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> streams) noexcept;

/// Counter-based generator: output n is a bijective mix of (key, n). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> streams) noexcept
      : key_(derive_seed(seed, streams)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace egem
