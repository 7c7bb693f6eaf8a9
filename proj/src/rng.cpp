#include "egem/rng.hpp"

namespace egem {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> streams) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t s : streams) {
    h = mix64(h ^ mix64(s + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

}  // namespace egem
