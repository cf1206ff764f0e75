#pragma once

#include <span>
#include <string>
#include <vector>

#include "seedmap/acquisition.hpp"
#include "seedmap/features.hpp"

namespace seedmap::filter {

/// Over-selection filter: the acquisition function selects candidate_count
/// samples, the round(candidate_count * drop_frac) most similar to the
/// bad seeds are discarded, and exactly `budget` remain. Defaults give the
/// 125 / 25 / 100 split.
struct FilterConfig {
  double drop_frac = 0.2;
  std::size_t budget = 100;
  // when true, an empty bad-seed set disables filtering instead of
  // dropping the quota by id tie-break
  bool identity_on_empty = false;

  std::size_t candidate_count() const;
  void validate() const;
};

bool operator==(const FilterConfig& a, const FilterConfig& b);

/// Maximum cosine similarity over the bad-seed set; proximity to any one
/// bad seed marks a candidate suspect. Empty set yields 0.
double similarity_to_bad_seeds(const features::FeatureVector& candidate,
                               std::span<const features::FeatureVector> bad_seeds);

struct FilterOutcome {
  std::vector<std::string> kept_ids;     // acquisition-score order
  std::vector<std::string> dropped_ids;  // most similar first
  std::vector<double> similarities;      // aligned with the candidate order
};

/// Drops the round(n * drop_frac) candidates with the highest bad-seed
/// similarity (ties drop the higher id). Kept candidates keep their
/// acquisition order.
FilterOutcome filter_candidates(
    const acquisition::SelectionResult& candidates,
    std::span<const features::FeatureVector> candidate_vectors,
    std::span<const features::FeatureVector> bad_seed_vectors,
    const FilterConfig& config);

}  // namespace seedmap::filter
