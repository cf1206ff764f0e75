#include "seedmap/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "seedmap/error.hpp"
#include "seedmap/rng.hpp"

namespace seedmap::acquisition {
namespace {

// ||x - c||^2 against a dense centroid, using the cached ||x|| and ||c||^2.
double distance_sq_to_centroid(const features::FeatureVector& x,
                               const std::vector<double>& centroid,
                               double centroid_norm_sq) {
  double cross = 0.0;
  for (const auto& [bucket, value] : x.entries()) {
    cross += value * centroid[bucket];
  }
  const double d = x.norm() * x.norm() - 2.0 * cross + centroid_norm_sq;
  return d > 0.0 ? d : 0.0;
}

double distance_sq_between(const features::FeatureVector& a,
                           const features::FeatureVector& b) {
  const double d =
      a.norm() * a.norm() + b.norm() * b.norm() - 2.0 * features::dot(a, b);
  return d > 0.0 ? d : 0.0;
}

std::vector<std::size_t> kmeans_pp_seeds(
    std::span<const features::FeatureVector> points, std::size_t k, Rng& rng) {
  std::vector<std::size_t> centers;
  centers.reserve(k);
  centers.push_back(static_cast<std::size_t>(rng.below(points.size())));

  std::vector<double> min_dist_sq(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    min_dist_sq[i] = distance_sq_between(points[i], points[centers[0]]);
  }
  std::vector<bool> chosen(points.size(), false);
  chosen[centers[0]] = true;

  while (centers.size() < k) {
    double total = 0.0;
    for (const double d : min_dist_sq) total += d;
    std::size_t next = points.size();
    if (total > 0.0) {
      const double u = rng.next_double() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        cumulative += min_dist_sq[i];
        if (u < cumulative) {
          next = i;
          break;
        }
      }
    }
    if (next == points.size() || chosen[next]) {
      // all remaining mass sits on duplicates; take the first unchosen point
      next = points.size();
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!chosen[i]) {
          next = i;
          break;
        }
      }
    }
    centers.push_back(next);
    chosen[next] = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      min_dist_sq[i] =
          std::min(min_dist_sq[i], distance_sq_between(points[i], points[next]));
    }
  }
  return centers;
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "deepgini") return Strategy::deepgini;
  if (name == "kmeans") return Strategy::kmeans;
  if (name == "random") return Strategy::random;
  throw ConfigError("unknown acquisition strategy \"" + std::string(name) + "\"");
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::deepgini: return "deepgini";
    case Strategy::kmeans: return "kmeans";
    case Strategy::random: return "random";
  }
  return "deepgini";
}

double gini_score(std::span<const double> class_probabilities) {
  if (class_probabilities.empty()) {
    throw ValidationError("gini_score: empty distribution");
  }
  double sum = 0.0;
  double score = 0.0;
  for (const double p : class_probabilities) {
    if (p < 0.0) throw ValidationError("gini_score: negative probability");
    sum += p;
    score += p * p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ValidationError("gini_score: probabilities sum to " +
                          std::to_string(sum) + ", not 1");
  }
  return score;
}

SelectionResult select_deepgini(std::span<const std::string> pool_ids,
                                std::span<const std::array<double, 2>> pool_probas,
                                std::size_t k) {
  if (pool_ids.empty()) throw ValidationError("select_deepgini: empty pool");
  if (pool_ids.size() != pool_probas.size()) {
    throw ValidationError("select_deepgini: ids and probabilities differ in size");
  }
  std::vector<std::size_t> order(pool_ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> purity(pool_ids.size());
  for (std::size_t i = 0; i < pool_ids.size(); ++i) {
    purity[i] = gini_score(pool_probas[i]);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (purity[a] != purity[b]) return purity[a] < purity[b];
    return pool_ids[a] < pool_ids[b];
  });
  const std::size_t take = std::min(k, pool_ids.size());
  SelectionResult result;
  result.strategy = Strategy::deepgini;
  result.selected_ids.reserve(take);
  result.scores.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.selected_ids.push_back(pool_ids[order[i]]);
    result.scores.push_back(purity[order[i]]);
  }
  return result;
}

SelectionResult select_deepgini(const learner::TrainedModel& model,
                                std::span<const corpus::Sample> pool,
                                const features::FeaturizerState& featurizer,
                                std::size_t k) {
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const auto& sample : pool) ids.push_back(sample.id);
  const auto probas = learner::predict_proba(model, pool, featurizer);
  return select_deepgini(ids, probas, k);
}

KMeansResult run_kmeans(std::span<const features::FeatureVector> points,
                        std::size_t k, std::uint64_t rng_seed, int max_iters) {
  if (points.empty()) throw ValidationError("run_kmeans: no points");
  if (k == 0 || k > points.size()) {
    throw ValidationError("run_kmeans: k must be in [1, n]");
  }
  const std::size_t dim = points[0].dimension();
  Rng rng(rng_seed);

  KMeansResult result;
  result.centroids.assign(k, std::vector<double>(dim, 0.0));
  std::vector<double> centroid_norm_sq(k, 0.0);
  {
    const auto seeds = kmeans_pp_seeds(points, k, rng);
    for (std::size_t c = 0; c < k; ++c) {
      for (const auto& [bucket, value] : points[seeds[c]].entries()) {
        result.centroids[c][bucket] = value;
      }
      centroid_norm_sq[c] = points[seeds[c]].norm() * points[seeds[c]].norm();
    }
  }

  result.assignments.assign(points.size(), -1);
  std::vector<std::size_t> cluster_sizes(k, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double sse = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = distance_sq_to_centroid(points[i], result.centroids[c],
                                                 centroid_norm_sq[c]);
        if (d < best_dist) {
          best_dist = d;
          best = static_cast<int>(c);
        }
      }
      sse += best_dist;
      if (result.assignments[i] != best) {
        result.assignments[i] = best;
        changed = true;
      }
    }
    result.sse_per_iteration.push_back(sse);
    if (!changed) break;

    std::fill(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = static_cast<std::size_t>(result.assignments[i]);
      ++cluster_sizes[c];
      for (const auto& [bucket, value] : points[i].entries()) {
        sums[c][bucket] += value;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (cluster_sizes[c] == 0) continue;  // keep the previous centroid
      const double inv = 1.0 / static_cast<double>(cluster_sizes[c]);
      double norm_sq = 0.0;
      for (std::size_t b = 0; b < dim; ++b) {
        result.centroids[c][b] = sums[c][b] * inv;
        norm_sq += result.centroids[c][b] * result.centroids[c][b];
      }
      centroid_norm_sq[c] = norm_sq;
    }
  }
  return result;
}

SelectionResult select_kmeans(std::span<const std::string> pool_ids,
                              std::span<const features::FeatureVector> pool_vectors,
                              std::size_t k, std::uint64_t rng_seed,
                              int max_iters) {
  if (pool_ids.empty()) throw ValidationError("select_kmeans: empty pool");
  if (pool_ids.size() != pool_vectors.size()) {
    throw ValidationError("select_kmeans: ids and vectors differ in size");
  }
  SelectionResult result;
  result.strategy = Strategy::kmeans;
  if (k >= pool_ids.size()) {
    // pool too small to cluster: return it whole
    result.selected_ids.assign(pool_ids.begin(), pool_ids.end());
    result.scores.assign(pool_ids.size(), 0.0);
    return result;
  }

  const KMeansResult clusters =
      run_kmeans(pool_vectors, k, rng_seed, max_iters);
  std::vector<bool> taken(pool_ids.size(), false);
  std::vector<std::size_t> order(pool_ids.size());
  for (std::size_t c = 0; c < k; ++c) {
    double norm_sq = 0.0;
    for (const double v : clusters.centroids[c]) norm_sq += v * v;
    std::vector<double> dist(pool_ids.size());
    for (std::size_t i = 0; i < pool_ids.size(); ++i) {
      dist[i] = std::sqrt(distance_sq_to_centroid(pool_vectors[i],
                                                  clusters.centroids[c], norm_sq));
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return pool_ids[a] < pool_ids[b];
    });
    for (const auto i : order) {
      if (taken[i]) continue;  // already selected for an earlier centroid
      taken[i] = true;
      result.selected_ids.push_back(pool_ids[i]);
      result.scores.push_back(dist[i]);
      break;
    }
  }
  return result;
}

SelectionResult select_random(std::span<const std::string> pool_ids,
                              std::size_t k, std::uint64_t rng_seed) {
  if (pool_ids.empty()) throw ValidationError("select_random: empty pool");
  Rng rng(rng_seed);
  const std::size_t take = std::min(k, pool_ids.size());
  SelectionResult result;
  result.strategy = Strategy::random;
  result.selected_ids.reserve(take);
  for (const auto i : rng.sample_without_replacement(pool_ids.size(), take)) {
    result.selected_ids.push_back(pool_ids[i]);
  }
  result.scores.assign(take, 0.0);
  return result;
}

}  // namespace seedmap::acquisition
