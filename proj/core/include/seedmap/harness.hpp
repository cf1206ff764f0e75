#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedmap/acquisition.hpp"
#include "seedmap/corpus.hpp"
#include "seedmap/features.hpp"
#include "seedmap/filter.hpp"
#include "seedmap/learner.hpp"
#include "seedmap/metrics.hpp"

namespace seedmap::harness {

enum class Arm { random, standard, proposed };

Arm parse_arm(std::string_view name);
std::string_view to_string(Arm arm);

struct ALConfig {
  std::size_t initial_seed_size = 500;
  std::size_t budget_per_iter = 100;
  int iterations = 10;
  Arm arm = Arm::standard;
  acquisition::Strategy strategy = acquisition::Strategy::deepgini;
  filter::FilterConfig filter;      // used by the proposed arm only
  learner::LearnerConfig learner;
  std::uint64_t rng_seed = 0;
  int random_repeats = 5;           // sub-runs of the random baseline
  int kmeans_max_iters = 100;
  int jobs = 1;

  void validate() const;
};

bool operator==(const ALConfig& a, const ALConfig& b);

struct IterationRecord {
  int iteration = 0;  // 0 is the pre-budget baseline on the seed set
  std::size_t labeled_count = 0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::string> selected_ids;
  std::vector<std::string> dropped_ids;  // proposed arm only
};

bool operator==(const IterationRecord& a, const IterationRecord& b);

struct SubRunSeries {
  std::uint64_t selection_seed = 0;
  std::vector<IterationRecord> iterations;
};

bool operator==(const SubRunSeries& a, const SubRunSeries& b);

inline constexpr int kReportFormatVersion = 1;

/// One experiment run. For the random arm, `iterations` holds the series
/// of per-iteration means over the sub-runs (ids left empty past iteration
/// 0) and `sub_runs` the individual series. wall_clock_seconds is a
/// diagnostic: it is not persisted and takes no part in equality, so
/// repeated runs produce byte-identical report files.
struct RunReport {
  int format_version = kReportFormatVersion;
  ALConfig config;
  std::vector<IterationRecord> iterations;
  std::vector<SubRunSeries> sub_runs;
  bool truncated = false;  // pool ran out before the configured iterations
  double wall_clock_seconds = 0.0;
};

bool operator==(const RunReport& a, const RunReport& b);

/// Pool-based active learning over the bundle's training set, with the
/// held-out labels acting as the annotation oracle. Iteration 0 trains on
/// an initial seed set drawn only from config.rng_seed (identical across
/// arms); every following iteration scores the remaining pool, selects a
/// batch (over-selecting and filtering against the bad seeds in the
/// proposed arm), reveals its labels, retrains from scratch and evaluates
/// on the bundle's test set. Selected samples leave the pool permanently;
/// filtered-out candidates return to it unlabeled.
RunReport run_active_learning(const corpus::CorpusBundle& bundle,
                              std::span<const corpus::Sample> bad_seeds,
                              const features::FeaturizerState& featurizer,
                              const learner::Classifier& classifier,
                              const ALConfig& config);

/// Built-in-learner convenience overload.
RunReport run_active_learning(const corpus::CorpusBundle& bundle,
                              std::span<const corpus::Sample> bad_seeds,
                              const features::FeaturizerState& featurizer,
                              const ALConfig& config);

struct FractionRow {
  double fraction = 0.0;
  std::size_t train_size = 0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  bool is_max_f1 = false;
  bool is_max_accuracy = false;
};

/// Trains on nested prefixes (10%, 20%, ..., 100%) of a seed-shuffled
/// training set, evaluating each on the fixed test set. Every prefix is a
/// subset of the larger ones, and training order inside a prefix follows
/// the corpus order, so the 100% row reproduces full-set training exactly.
std::vector<FractionRow> run_fraction_sweep(const corpus::CorpusBundle& bundle,
                                            const learner::LearnerConfig& config,
                                            int jobs = 1,
                                            std::size_t feature_dimension =
                                                features::kDefaultDimension);

/// JSON persistence: {format_version, config, iterations, summary}.
/// load(save(r)) is structurally equal to r; loading a report with a
/// different format_version raises VersionMismatchError naming both.
void save_report(const RunReport& report, const std::string& path);
RunReport load_report(const std::string& path);
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text, const std::string& source = "");

/// Per-iteration macro-F1 of the budgeted iterations (iteration >= 1).
std::vector<double> f1_series(const RunReport& report);
double mean_macro_f1(const RunReport& report);

/// Tables-style comparison of the three arms, pairing F1 by iteration.
std::vector<metrics::ArmComparison> compare_reports(const RunReport& random_mean,
                                                    const RunReport& standard_run,
                                                    const RunReport& proposed_run);

}  // namespace seedmap::harness
