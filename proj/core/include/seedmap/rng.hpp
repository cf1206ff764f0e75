#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace seedmap {

// Deterministic pseudo-random source. <random> distributions and
// std::shuffle are not specified bit-for-bit across standard libraries,
// so everything seeded here goes through this class instead. splitmix64
// core; identical output stream for a given seed on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    if (values.size() < 2) return;
    for (std::size_t i = values.size() - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(below(i + 1));
      std::swap(values[i], values[j]);
    }
  }

  /// Draws `draw` distinct indices from [0, population) in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                      std::size_t draw);

 private:
  std::uint64_t state_;
};

// Named seed derivation: one user-facing seed fans out into independent
// streams ("split", "train", ...) so partial reproduction stays possible.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);
std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                          std::uint64_t index);

}  // namespace seedmap
