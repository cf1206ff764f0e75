#include "seedmap/rng.hpp"

#include <limits>
#include <numeric>

#include "seedmap/error.hpp"

namespace seedmap {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  return mix64(state_);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t population,
                                                         std::size_t draw) {
  if (draw > population) {
    throw ValidationError("sample_without_replacement: draw exceeds population");
  }
  std::vector<std::size_t> indices(population);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < draw; ++i) {
    const auto j = i + static_cast<std::size_t>(below(population - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(draw);
  return indices;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  // FNV-1a over the label, xored with the base and finalized
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return mix64(h ^ base);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                          std::uint64_t index) {
  return mix64(derive_seed(base, label) ^
               (0x9e3779b97f4a7c15ull * (index + 1)));
}

}  // namespace seedmap
