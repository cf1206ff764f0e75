#include "seedmap/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seedmap/error.hpp"

namespace seedmap::filter {

std::size_t FilterConfig::candidate_count() const {
  validate();
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(budget) / (1.0 - drop_frac)));
}

void FilterConfig::validate() const {
  if (drop_frac < 0.0 || drop_frac >= 1.0) {
    throw ConfigError("drop_frac must be in [0, 1)");
  }
  if (budget == 0) throw ConfigError("budget must be >= 1");
  const auto candidates = static_cast<std::size_t>(
      std::llround(static_cast<double>(budget) / (1.0 - drop_frac)));
  const auto dropped = static_cast<std::size_t>(
      std::llround(static_cast<double>(candidates) * drop_frac));
  if (candidates - dropped != budget) {
    throw ConfigError("drop_frac " + std::to_string(drop_frac) +
                      " and budget " + std::to_string(budget) +
                      " do not round to a consistent candidate count");
  }
}

bool operator==(const FilterConfig& a, const FilterConfig& b) {
  return a.drop_frac == b.drop_frac && a.budget == b.budget &&
         a.identity_on_empty == b.identity_on_empty;
}

double similarity_to_bad_seeds(const features::FeatureVector& candidate,
                               std::span<const features::FeatureVector> bad_seeds) {
  double best = 0.0;
  for (const auto& seed : bad_seeds) {
    best = std::max(best, features::cosine_similarity(candidate, seed));
  }
  return best;
}

FilterOutcome filter_candidates(
    const acquisition::SelectionResult& candidates,
    std::span<const features::FeatureVector> candidate_vectors,
    std::span<const features::FeatureVector> bad_seed_vectors,
    const FilterConfig& config) {
  config.validate();
  const std::size_t n = candidates.selected_ids.size();
  if (candidate_vectors.size() != n) {
    throw ValidationError("filter_candidates: vectors and ids differ in size");
  }

  FilterOutcome outcome;
  outcome.similarities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    outcome.similarities[i] =
        similarity_to_bad_seeds(candidate_vectors[i], bad_seed_vectors);
  }

  std::size_t drop_count = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * config.drop_frac));
  if (config.identity_on_empty && bad_seed_vectors.empty()) drop_count = 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (outcome.similarities[a] != outcome.similarities[b]) {
      return outcome.similarities[a] > outcome.similarities[b];
    }
    return candidates.selected_ids[a] > candidates.selected_ids[b];
  });

  std::vector<bool> dropped(n, false);
  outcome.dropped_ids.reserve(drop_count);
  for (std::size_t i = 0; i < drop_count; ++i) {
    dropped[order[i]] = true;
    outcome.dropped_ids.push_back(candidates.selected_ids[order[i]]);
  }
  outcome.kept_ids.reserve(n - drop_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) outcome.kept_ids.push_back(candidates.selected_ids[i]);
  }
  return outcome;
}

}  // namespace seedmap::filter
