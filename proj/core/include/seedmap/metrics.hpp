#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seedmap/corpus.hpp"

namespace seedmap::metrics {

struct ConfusionCounts {
  // indexed by class (0/1)
  std::array<std::int64_t, 2> true_positive{};
  std::array<std::int64_t, 2> false_positive{};
  std::array<std::int64_t, 2> false_negative{};
  std::array<std::int64_t, 2> true_negative{};
};

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted);

/// Unweighted mean of the per-class F1 scores. A class with undefined
/// precision or recall contributes F1 = 0, which keeps the metric
/// comparable when a degenerate model predicts one class only.
double macro_f1(std::span<const int> truth, std::span<const int> predicted);

double accuracy(std::span<const int> truth, std::span<const int> predicted);

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  int degrees_of_freedom = 0;
  std::size_t n_pairs = 0;
  // sd of the differences was zero; t is 0 (all-zero differences) or +-inf
  bool zero_variance = false;
};

/// Two-tailed paired t-test: d = a - b, t = mean(d) / (sd(d) / sqrt(n))
/// with the n-1 sample standard deviation, p from Student's t with
/// df = n - 1. Requires n >= 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// P(|T_df| >= |t|) via the regularized incomplete beta function.
double student_t_two_tailed_p(double t, int df);

/// I_x(a, b), continued-fraction evaluation (double precision).
double regularized_incomplete_beta(double a, double b, double x);

/// Sample standard deviation (n - 1 denominator). Requires n >= 2.
double sample_std(std::span<const double> values);

/// Per-run stability: sample standard deviation of a per-iteration F1 series.
double iteration_stability(std::span<const double> f1_series);

struct BadSeedProfile {
  std::size_t count = 0;
  std::array<double, 2> class_ratio{};  // fraction of bad seeds per label
  std::array<double, 2> bad_seed_mean_token_length{};   // by class, 0 if absent
  std::array<double, 2> reference_mean_token_length{};  // by class
  double bad_seed_mean_token_length_all = 0.0;
  double reference_mean_token_length_all = 0.0;
};

/// Class-ratio and token-length statistics of a bad-seed set against its
/// reference corpus. Unknown ids raise ValidationError; an empty set raises
/// EmptyProfileError.
BadSeedProfile profile_bad_seeds(std::span<const std::string> bad_seed_ids,
                                 std::span<const corpus::Sample> reference);

struct ArmComparison {
  std::string pairing;
  TTestResult t_test;
  double mean_improvement_pct = 0.0;
};

/// Pairs per-iteration F1 series by index: proposed vs random (already
/// averaged over its sub-runs) and proposed vs standard. Improvement is
/// (mean(proposed) - mean(other)) / mean(other) * 100.
std::vector<ArmComparison> compare_arms(std::span<const double> random_mean_f1,
                                        std::span<const double> standard_f1,
                                        std::span<const double> proposed_f1);

}  // namespace seedmap::metrics
