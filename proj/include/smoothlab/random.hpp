#pragma once

// Counter-based randomness: the value at (seed, counter) is a pure function,
// so subsets do not depend on iteration order or thread count.

#include <cstdint>
#include <span>
#include <vector>

namespace smoothlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (counter * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Keeps each element of `pool` independently with probability delta,
/// keyed on the element value.
inline std::vector<std::uint64_t> random_subset(std::span<const std::uint64_t> pool, double delta,
                                                std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v : pool)
    if (counter_uniform(seed, v) < delta) out.push_back(v);
  return out;
}

}  // namespace smoothlab
