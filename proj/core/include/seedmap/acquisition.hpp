#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedmap/features.hpp"
#include "seedmap/learner.hpp"

namespace seedmap::acquisition {

enum class Strategy { deepgini, kmeans, random };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

struct AcquisitionConfig {
  Strategy strategy = Strategy::deepgini;
  std::size_t select_count = 100;
  std::uint64_t rng_seed = 0;
  int kmeans_max_iters = 100;
};

struct SelectionResult {
  Strategy strategy = Strategy::deepgini;
  std::vector<std::string> selected_ids;  // distinct, length min(k, pool)
  std::vector<double> scores;             // aligned with selected_ids
};

/// Gini purity sum(p_c^2) of a class distribution. Probabilities must be
/// non-negative and sum to 1 within 1e-9. Selection ranks ascending purity,
/// i.e. most uncertain first.
double gini_score(std::span<const double> class_probabilities);

/// The k pool samples with the smallest purity; ties break by ascending id.
SelectionResult select_deepgini(std::span<const std::string> pool_ids,
                                std::span<const std::array<double, 2>> pool_probas,
                                std::size_t k);
SelectionResult select_deepgini(const learner::TrainedModel& model,
                                std::span<const corpus::Sample> pool,
                                const features::FeaturizerState& featurizer,
                                std::size_t k);

struct KMeansResult {
  std::vector<int> assignments;           // per point, centroid index
  std::vector<std::vector<double>> centroids;  // dense, k x dimension
  std::vector<double> sse_per_iteration;  // non-increasing
};

/// Lloyd's algorithm with k-means++ seeding, Euclidean metric,
/// single-threaded and deterministic per seed. Empty clusters keep their
/// previous centroid.
KMeansResult run_kmeans(std::span<const features::FeatureVector> points,
                        std::size_t k, std::uint64_t rng_seed, int max_iters);

/// Clusters the pool and picks the sample nearest each final centroid
/// (ties by ascending id, duplicates resolved by next-nearest). Scores are
/// the Euclidean distances to the centroid. A pool smaller than k is
/// returned whole.
SelectionResult select_kmeans(std::span<const std::string> pool_ids,
                              std::span<const features::FeatureVector> pool_vectors,
                              std::size_t k, std::uint64_t rng_seed,
                              int max_iters = 100);

/// Uniform draw without replacement; scores are 0.
SelectionResult select_random(std::span<const std::string> pool_ids,
                              std::size_t k, std::uint64_t rng_seed);

}  // namespace seedmap::acquisition
