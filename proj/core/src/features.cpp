#include "seedmap/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "seedmap/error.hpp"

namespace seedmap::features {
namespace {

bool is_word_char(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool is_space_char(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

double norm_of(const std::vector<std::pair<std::uint32_t, double>>& entries) {
  double sum = 0.0;
  for (const auto& [bucket, value] : entries) sum += value * value;
  return std::sqrt(sum);
}

}  // namespace

FeatureVector FeatureVector::from_dense(std::span<const double> values) {
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
    }
  }
  return from_sparse(values.size(), std::move(entries));
}

FeatureVector FeatureVector::from_sparse(
    std::size_t dimension,
    std::vector<std::pair<std::uint32_t, double>> entries) {
  FeatureVector v;
  v.dimension_ = dimension;
  v.entries_ = std::move(entries);
  v.norm_ = norm_of(v.entries_);
  return v;
}

std::vector<double> FeatureVector::to_dense() const {
  std::vector<double> out(dimension_, 0.0);
  for (const auto& [bucket, value] : entries_) out[bucket] = value;
  return out;
}

std::vector<std::string> tokenize(std::string_view code) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < code.size()) {
    const auto c = static_cast<unsigned char>(code[i]);
    if (is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < code.size() && is_word_char(static_cast<unsigned char>(code[j]))) {
        ++j;
      }
      tokens.emplace_back(code.substr(i, j - i));
      i = j;
    } else {
      if (!is_space_char(c)) tokens.emplace_back(1, code[i]);
      ++i;
    }
  }
  return tokens;
}

std::uint32_t token_bucket(std::string_view token, std::size_t dimension) {
  // FNV-1a over the token bytes; fixed constants, no seed
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : token) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return static_cast<std::uint32_t>(h % dimension);
}

FeaturizerState fit_featurizer(std::span<const corpus::Sample> train,
                               std::size_t dimension) {
  if (train.empty()) {
    throw ValidationError("fit_featurizer: training pool is empty");
  }
  if (dimension == 0) throw ConfigError("featurizer dimension must be >= 1");

  std::vector<std::size_t> document_frequency(dimension, 0);
  std::unordered_set<std::uint32_t> seen;
  for (const auto& sample : train) {
    seen.clear();
    for (const auto& token : tokenize(sample.code)) {
      seen.insert(token_bucket(token, dimension));
    }
    for (const auto bucket : seen) ++document_frequency[bucket];
  }

  FeaturizerState state;
  state.dimension = dimension;
  state.fit_corpus_size = train.size();
  state.idf.resize(dimension);
  const double n = 1.0 + static_cast<double>(train.size());
  for (std::size_t b = 0; b < dimension; ++b) {
    state.idf[b] =
        std::log(n / (1.0 + static_cast<double>(document_frequency[b]))) + 1.0;
  }
  return state;
}

FeatureVector vectorize(const FeaturizerState& state, std::string_view code) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& token : tokenize(code)) {
    counts[token_bucket(token, state.dimension)] += 1.0;
  }
  std::vector<std::pair<std::uint32_t, double>> entries(counts.begin(),
                                                        counts.end());
  std::sort(entries.begin(), entries.end());
  double sum_sq = 0.0;
  for (auto& [bucket, value] : entries) {
    value *= state.idf[bucket];
    sum_sq += value * value;
  }
  if (sum_sq > 0.0) {
    const double inv_norm = 1.0 / std::sqrt(sum_sq);
    for (auto& [bucket, value] : entries) value *= inv_norm;
  }
  return FeatureVector::from_sparse(state.dimension, std::move(entries));
}

std::vector<FeatureVector> vectorize_all(
    const FeaturizerState& state, std::span<const corpus::Sample> samples) {
  std::vector<FeatureVector> out;
  out.reserve(samples.size());
  for (const auto& sample : samples) out.push_back(vectorize(state, sample.code));
  return out;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  if (a.dimension() != b.dimension()) {
    throw ValidationError("dot: dimension mismatch (" +
                          std::to_string(a.dimension()) + " vs " +
                          std::to_string(b.dimension()) + ")");
  }
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first == eb[j].first) {
      sum += ea[i].second * eb[j].second;
      ++i;
      ++j;
    } else if (ea[i].first < eb[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  const double product = dot(a, b);
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  return product / (a.norm() * b.norm());
}

}  // namespace seedmap::features
