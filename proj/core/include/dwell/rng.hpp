#pragma once

#include <cstdint>

namespace dwell {

/// SplitMix64 (Steele, Lea, Flood 2014) used as a counter-based generator:
/// draw i of stream `seed` is mix(seed + (i + 1) * 0x9E3779B97F4A7C15).
/// Being a pure function of (seed, i), draws can be taken in any order or
/// from any thread and still reproduce exactly.
constexpr std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of draw `index`.
constexpr double uniform01(std::uint64_t seed, std::uint64_t index) noexcept {
  return static_cast<double>(splitmix64(seed, index) >> 11) * 0x1.0p-53;
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t next() noexcept { return splitmix64(seed_, counter_++); }
  constexpr double uniform() noexcept { return uniform01(seed_, counter_++); }
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace dwell
