#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedmap/corpus.hpp"
#include "seedmap/learner.hpp"

namespace seedmap::cartography {

// Region rule over the tracked epochs:
//   hard      confidence < tau_c and variability < tau_v  (the bad seeds)
//   ambiguous variability >= tau_v
//   easy      everything else
enum class Region { easy, ambiguous, hard };

std::string_view to_string(Region region);

/// Per-sample training-dynamics statistics. confidence is the mean
/// true-label probability over the tracked epochs, variability the
/// population standard deviation of the same values, correctness the
/// fraction of tracked epochs with a correct argmax prediction.
struct MapEntry {
  std::string sample_id;
  double confidence = 0.0;
  double variability = 0.0;
  double correctness = 0.0;
  Region region = Region::easy;
};

struct BadSeedCriteria {
  double confidence_threshold = 0.3;
  double variability_threshold = 0.4;
  int track_from_epoch = 3;
  int track_to_epoch = 0;  // 0 means the log's final epoch

  int resolved_track_to(int total_epochs) const;
  void validate(int total_epochs) const;
};

bool operator==(const BadSeedCriteria& a, const BadSeedCriteria& b);

struct BadSeedSet {
  int evaluated_at_epoch = 0;
  std::vector<std::string> sample_ids;  // sorted ascending
  BadSeedCriteria criteria;
};

/// Statistics over epochs [track_from_epoch, as_of_epoch], sorted by id.
/// An incomplete log raises ValidationError listing the missing
/// (sample, epoch) pairs.
std::vector<MapEntry> build_map(const learner::DynamicsLog& dynamics,
                                const BadSeedCriteria& criteria,
                                int as_of_epoch);

/// Ids whose confidence and variability both fall strictly below the
/// thresholds, i.e. exactly the hard region.
BadSeedSet identify_bad_seeds(const learner::DynamicsLog& dynamics,
                              const BadSeedCriteria& criteria,
                              int as_of_epoch);

/// high (>= 0.9), mid ([0.4, 0.7]), low (<= 0.3) or other.
std::string_view correctness_band(double correctness);

/// CSV with columns id,confidence,variability,correctness,region,
/// correctness_band; rows sorted by id, reals as 6-decimal fixed point,
/// LF line endings. header_comments are emitted first as "# ..." lines.
void export_map(std::span<const MapEntry> entries, const std::string& path,
                std::span<const std::string> header_comments = {});

struct EpochSweepRow {
  int epoch = 0;
  std::size_t bad_seed_count = 0;
  bool feasible = true;  // false when the removal empties a class
  double f1_after_removal = 0.0;
  double random_removal_f1_mean = 0.0;  // same count removed, 5 random draws
};

struct EpochSweepReport {
  double baseline_f1 = 0.0;  // trained on the full training set
  std::vector<EpochSweepRow> rows;
  int winning_epoch = 0;
  BadSeedSet winning_bad_seeds;
};

/// Trains once on the full training set to obtain dynamics and a baseline,
/// then for every epoch in the tracked range removes that epoch's bad
/// seeds, retrains and evaluates on the bundle's test set, alongside a
/// five-draw random-removal control of the same size. The winning epoch
/// maximizes F1 after removal (ties go to the earliest epoch). All
/// retrains reuse the base learner seed so only the data changes.
EpochSweepReport epoch_sweep_removal(const corpus::CorpusBundle& bundle,
                                     const learner::Classifier& classifier,
                                     const learner::LearnerConfig& config,
                                     const BadSeedCriteria& criteria,
                                     int jobs = 1);

/// Convenience overload using the built-in logistic classifier with a
/// featurizer fitted on the bundle's training set.
EpochSweepReport epoch_sweep_removal(const corpus::CorpusBundle& bundle,
                                     const learner::LearnerConfig& config,
                                     const BadSeedCriteria& criteria,
                                     int jobs = 1,
                                     std::size_t feature_dimension =
                                         features::kDefaultDimension);

}  // namespace seedmap::cartography
