#include "seedmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "seedmap/error.hpp"
#include "seedmap/features.hpp"

namespace seedmap::metrics {
namespace {

void check_label_vectors(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw ValidationError("label vectors differ in length (" +
                          std::to_string(truth.size()) + " vs " +
                          std::to_string(predicted.size()) + ")");
  }
  if (truth.empty()) throw ValidationError("label vectors are empty");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if ((truth[i] != 0 && truth[i] != 1) || (predicted[i] != 0 && predicted[i] != 1)) {
      throw ValidationError("labels must be 0 or 1");
    }
  }
}

double mean(std::span<const double> values) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted) {
  check_label_vectors(truth, predicted);
  ConfusionCounts counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      const bool actual = truth[i] == c;
      const bool claimed = predicted[i] == c;
      if (actual && claimed) ++counts.true_positive[c];
      if (!actual && claimed) ++counts.false_positive[c];
      if (actual && !claimed) ++counts.false_negative[c];
      if (!actual && !claimed) ++counts.true_negative[c];
    }
  }
  return counts;
}

double macro_f1(std::span<const int> truth, std::span<const int> predicted) {
  const ConfusionCounts counts = confusion(truth, predicted);
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double tp = static_cast<double>(counts.true_positive[c]);
    const double fp = static_cast<double>(counts.false_positive[c]);
    const double fn = static_cast<double>(counts.false_negative[c]);
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double f1 =
        precision + recall > 0 ? 2.0 * precision * recall / (precision + recall)
                               : 0.0;
    sum += f1;
  }
  return sum / 2.0;
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
  check_label_vectors(truth, predicted);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == predicted[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, int df) {
  if (df < 1) throw ValidationError("student_t_two_tailed_p: df must be >= 1");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("paired_t_test: series differ in length");
  }
  if (a.size() < 2) {
    throw ValidationError("paired_t_test: need at least 2 pairs");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
  const double d_mean = mean(diff);
  double ss = 0.0;
  for (const double d : diff) ss += (d - d_mean) * (d - d_mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult result;
  result.n_pairs = n;
  result.degrees_of_freedom = static_cast<int>(n) - 1;
  if (sd == 0.0) {
    result.zero_variance = true;
    if (d_mean == 0.0) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.t_statistic = d_mean > 0
                               ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
    return result;
  }
  result.t_statistic = d_mean / (sd / std::sqrt(static_cast<double>(n)));
  result.p_value =
      student_t_two_tailed_p(result.t_statistic, result.degrees_of_freedom);
  return result;
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) {
    throw ValidationError("sample_std: need at least 2 values");
  }
  const double m = mean(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double iteration_stability(std::span<const double> f1_series) {
  return sample_std(f1_series);
}

BadSeedProfile profile_bad_seeds(std::span<const std::string> bad_seed_ids,
                                 std::span<const corpus::Sample> reference) {
  if (bad_seed_ids.empty()) {
    throw EmptyProfileError("profile_bad_seeds: bad-seed set is empty");
  }
  std::unordered_map<std::string_view, const corpus::Sample*> by_id;
  by_id.reserve(reference.size());
  for (const auto& sample : reference) by_id.emplace(sample.id, &sample);

  auto token_length = [](const corpus::Sample& s) {
    return static_cast<double>(features::tokenize(s.code).size());
  };

  BadSeedProfile profile;
  profile.count = bad_seed_ids.size();
  std::array<double, 2> bad_length_sum{};
  std::array<std::size_t, 2> bad_count{};
  double bad_length_total = 0.0;
  for (const auto& id : bad_seed_ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError("profile_bad_seeds: id \"" + id +
                            "\" not in reference corpus");
    }
    const corpus::Sample& sample = *it->second;
    if (!sample.label.has_value()) {
      throw ValidationError("profile_bad_seeds: sample \"" + id +
                            "\" has no label");
    }
    const double length = token_length(sample);
    bad_length_sum[*sample.label] += length;
    bad_length_total += length;
    ++bad_count[*sample.label];
  }

  std::array<double, 2> ref_length_sum{};
  std::array<std::size_t, 2> ref_count{};
  double ref_length_total = 0.0;
  for (const auto& sample : reference) {
    if (!sample.label.has_value()) {
      throw ValidationError("profile_bad_seeds: reference sample \"" +
                            sample.id + "\" has no label");
    }
    const double length = token_length(sample);
    ref_length_sum[*sample.label] += length;
    ref_length_total += length;
    ++ref_count[*sample.label];
  }

  for (int c = 0; c < 2; ++c) {
    profile.class_ratio[c] = static_cast<double>(bad_count[c]) /
                             static_cast<double>(profile.count);
    profile.bad_seed_mean_token_length[c] =
        bad_count[c] > 0 ? bad_length_sum[c] / static_cast<double>(bad_count[c])
                         : 0.0;
    profile.reference_mean_token_length[c] =
        ref_count[c] > 0 ? ref_length_sum[c] / static_cast<double>(ref_count[c])
                         : 0.0;
  }
  profile.bad_seed_mean_token_length_all =
      bad_length_total / static_cast<double>(profile.count);
  profile.reference_mean_token_length_all =
      reference.empty() ? 0.0
                        : ref_length_total / static_cast<double>(reference.size());
  return profile;
}

std::vector<ArmComparison> compare_arms(std::span<const double> random_mean_f1,
                                        std::span<const double> standard_f1,
                                        std::span<const double> proposed_f1) {
  if (random_mean_f1.size() != proposed_f1.size() ||
      standard_f1.size() != proposed_f1.size()) {
    throw ValidationError("compare_arms: iteration counts differ");
  }
  auto improvement = [&](std::span<const double> other) {
    const double other_mean = mean(other);
    const double proposed_mean = mean(proposed_f1);
    if (other_mean == 0.0) {
      return proposed_mean == 0.0 ? 0.0
                                  : std::numeric_limits<double>::infinity();
    }
    return (proposed_mean - other_mean) / other_mean * 100.0;
  };
  std::vector<ArmComparison> rows;
  rows.push_back({"proposed_vs_random", paired_t_test(proposed_f1, random_mean_f1),
                  improvement(random_mean_f1)});
  rows.push_back({"proposed_vs_standard", paired_t_test(proposed_f1, standard_f1),
                  improvement(standard_f1)});
  return rows;
}

}  // namespace seedmap::metrics
