#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace textanon {

// Unbiased draw in [0, n) straight off the mt19937_64 stream.
// std::uniform_int_distribution is implementation-defined, which would break
// byte-identical shuffles across standard libraries.
inline std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t v = gen();
  while (v >= limit) v = gen();
  return v % n;
}

// [0, 1) with 53 random bits, same everywhere for the same seed.
inline double draw_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(draw_below(gen, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace textanon
