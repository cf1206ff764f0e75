#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seedmap/corpus.hpp"

namespace seedmap::features {

inline constexpr std::size_t kDefaultDimension = 65536;

/// Fixed-dimension vector of non-negative reals with a cached Euclidean
/// norm. Stored sparsely (sorted bucket/value pairs) since hashed token
/// vectors are overwhelmingly zero at the default dimension.
class FeatureVector {
 public:
  FeatureVector() = default;

  static FeatureVector from_dense(std::span<const double> values);
  /// entries must be sorted by bucket with unique buckets.
  static FeatureVector from_sparse(
      std::size_t dimension, std::vector<std::pair<std::uint32_t, double>> entries);

  std::size_t dimension() const { return dimension_; }
  double norm() const { return norm_; }
  bool is_zero() const { return entries_.empty(); }
  const std::vector<std::pair<std::uint32_t, double>>& entries() const {
    return entries_;
  }
  std::vector<double> to_dense() const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::pair<std::uint32_t, double>> entries_;
  double norm_ = 0.0;
};

/// Inverse-document-frequency weights fitted on a labeled training pool.
/// idf[b] = ln((1 + N) / (1 + df_b)) + 1 over hash buckets.
struct FeaturizerState {
  std::size_t dimension = kDefaultDimension;
  std::vector<double> idf;
  std::size_t fit_corpus_size = 0;
};

/// Splits code into maximal [A-Za-z0-9_] runs plus one token per remaining
/// non-whitespace character. Case is preserved.
std::vector<std::string> tokenize(std::string_view code);

/// Seed-independent hash of the token bytes into [0, dimension).
std::uint32_t token_bucket(std::string_view token, std::size_t dimension);

FeaturizerState fit_featurizer(std::span<const corpus::Sample> train,
                               std::size_t dimension = kDefaultDimension);

/// Hashed token counts times idf, L2-normalized. An empty token stream
/// yields the zero vector.
FeatureVector vectorize(const FeaturizerState& state, std::string_view code);

std::vector<FeatureVector> vectorize_all(const FeaturizerState& state,
                                         std::span<const corpus::Sample> samples);

double dot(const FeatureVector& a, const FeatureVector& b);

/// dot(a,b) / (|a||b|); 0 when either vector is zero. Dimensions must match.
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);

}  // namespace seedmap::features
