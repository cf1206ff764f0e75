#include "seedmap/cartography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "seedmap/csv.hpp"
#include "seedmap/error.hpp"
#include "seedmap/metrics.hpp"
#include "seedmap/parallel.hpp"
#include "seedmap/rng.hpp"

namespace seedmap::cartography {
namespace {

struct SampleSeries {
  std::vector<double> p_true;   // indexed by epoch - track_from
  std::vector<bool> correct;
  std::vector<bool> present;
};

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::easy: return "easy";
    case Region::ambiguous: return "ambiguous";
    case Region::hard: return "hard";
  }
  return "easy";
}

int BadSeedCriteria::resolved_track_to(int total_epochs) const {
  return track_to_epoch == 0 ? total_epochs : track_to_epoch;
}

void BadSeedCriteria::validate(int total_epochs) const {
  if (confidence_threshold <= 0.0 || confidence_threshold >= 1.0) {
    throw ConfigError("confidence_threshold must be in (0, 1)");
  }
  if (variability_threshold <= 0.0 || variability_threshold > 0.5) {
    throw ConfigError("variability_threshold must be in (0, 0.5]");
  }
  const int track_to = resolved_track_to(total_epochs);
  if (track_from_epoch < 1 || track_from_epoch > track_to ||
      track_to > total_epochs) {
    throw ConfigError("epoch tracking range [" +
                      std::to_string(track_from_epoch) + ", " +
                      std::to_string(track_to) + "] is invalid for " +
                      std::to_string(total_epochs) + " epochs");
  }
}

bool operator==(const BadSeedCriteria& a, const BadSeedCriteria& b) {
  return a.confidence_threshold == b.confidence_threshold &&
         a.variability_threshold == b.variability_threshold &&
         a.track_from_epoch == b.track_from_epoch &&
         a.track_to_epoch == b.track_to_epoch;
}

std::vector<MapEntry> build_map(const learner::DynamicsLog& dynamics,
                                const BadSeedCriteria& criteria,
                                int as_of_epoch) {
  criteria.validate(dynamics.epochs);
  if (as_of_epoch < criteria.track_from_epoch ||
      as_of_epoch > criteria.resolved_track_to(dynamics.epochs)) {
    throw ConfigError("as_of_epoch " + std::to_string(as_of_epoch) +
                      " outside tracked range");
  }
  const int track_from = criteria.track_from_epoch;
  const auto tracked =
      static_cast<std::size_t>(as_of_epoch - track_from + 1);

  // std::map keeps ids sorted for the output
  std::map<std::string, SampleSeries> series;
  for (const auto& record : dynamics.records) {
    if (record.epoch < track_from || record.epoch > as_of_epoch) continue;
    auto& s = series[record.sample_id];
    if (s.p_true.empty()) {
      s.p_true.assign(tracked, 0.0);
      s.correct.assign(tracked, false);
      s.present.assign(tracked, false);
    }
    const auto slot = static_cast<std::size_t>(record.epoch - track_from);
    if (s.present[slot]) {
      throw ValidationError("dynamics log has a duplicate entry for (" +
                            record.sample_id + ", epoch " +
                            std::to_string(record.epoch) + ")");
    }
    s.p_true[slot] = record.p_true;
    s.correct[slot] = record.correct;
    s.present[slot] = true;
  }

  std::vector<std::string> missing;
  for (const auto& [id, s] : series) {
    for (std::size_t e = 0; e < tracked; ++e) {
      if (!s.present[e]) {
        missing.push_back("(" + id + ", epoch " +
                          std::to_string(track_from + static_cast<int>(e)) +
                          ")");
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "dynamics log is missing " << missing.size() << " entries: ";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
      if (i > 0) msg << ", ";
      msg << missing[i];
    }
    if (missing.size() > shown) {
      msg << " and " << missing.size() - shown << " more";
    }
    throw ValidationError(msg.str());
  }

  std::vector<MapEntry> entries;
  entries.reserve(series.size());
  for (const auto& [id, s] : series) {
    double sum = 0.0;
    bool all_equal = true;
    for (const double p : s.p_true) {
      sum += p;
      all_equal = all_equal && p == s.p_true.front();
    }
    const double confidence =
        all_equal ? s.p_true.front() : sum / static_cast<double>(tracked);
    double ss = 0.0;
    for (const double p : s.p_true) ss += (p - confidence) * (p - confidence);
    // exactly zero for constant sequences
    const double variability =
        all_equal ? 0.0 : std::sqrt(ss / static_cast<double>(tracked));
    std::size_t correct_count = 0;
    for (const bool c : s.correct) correct_count += c ? 1 : 0;
    const double correctness =
        static_cast<double>(correct_count) / static_cast<double>(tracked);

    Region region = Region::easy;
    if (confidence < criteria.confidence_threshold &&
        variability < criteria.variability_threshold) {
      region = Region::hard;
    } else if (variability >= criteria.variability_threshold) {
      region = Region::ambiguous;
    }
    entries.push_back(MapEntry{id, confidence, variability, correctness, region});
  }
  return entries;
}

BadSeedSet identify_bad_seeds(const learner::DynamicsLog& dynamics,
                              const BadSeedCriteria& criteria,
                              int as_of_epoch) {
  BadSeedSet set;
  set.evaluated_at_epoch = as_of_epoch;
  set.criteria = criteria;
  for (const auto& entry : build_map(dynamics, criteria, as_of_epoch)) {
    if (entry.region == Region::hard) set.sample_ids.push_back(entry.sample_id);
  }
  return set;  // build_map output is already sorted by id
}

std::string_view correctness_band(double correctness) {
  if (correctness >= 0.9) return "high";
  if (correctness <= 0.3) return "low";
  if (correctness >= 0.4 && correctness <= 0.7) return "mid";
  return "other";
}

void export_map(std::span<const MapEntry> entries, const std::string& path,
                std::span<const std::string> header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& comment : header_comments) out << "# " << comment << "\n";
  out << "id,confidence,variability,correctness,region,correctness_band\n";
  std::vector<const MapEntry*> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const MapEntry* a, const MapEntry* b) {
              return a->sample_id < b->sample_id;
            });
  char buffer[64];
  for (const auto* entry : sorted) {
    std::snprintf(buffer, sizeof(buffer), "%.6f,%.6f,%.6f", entry->confidence,
                  entry->variability, entry->correctness);
    out << csv::escape_field(entry->sample_id) << ',' << buffer << ','
        << to_string(entry->region) << ','
        << correctness_band(entry->correctness) << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

EpochSweepReport epoch_sweep_removal(const corpus::CorpusBundle& bundle,
                                     const learner::Classifier& classifier,
                                     const learner::LearnerConfig& config,
                                     const BadSeedCriteria& criteria,
                                     int jobs) {
  config.validate();
  criteria.validate(config.epochs);
  if (bundle.train.empty() || bundle.test.empty()) {
    throw ValidationError("epoch_sweep_removal: bundle needs train and test");
  }

  learner::DynamicsLog dynamics;
  const auto base_model = classifier.fit(bundle.train, config, &dynamics);
  const auto [baseline_f1, baseline_acc] =
      learner::evaluate_classifier(classifier, *base_model, bundle.test);
  (void)baseline_acc;

  const int track_from = criteria.track_from_epoch;
  const int track_to = criteria.resolved_track_to(config.epochs);
  const auto n_epochs = static_cast<std::size_t>(track_to - track_from + 1);
  constexpr int kRandomDraws = 5;

  struct EpochTask {
    BadSeedSet bad_seeds;
    bool feasible = true;
    double f1_after_removal = 0.0;
    std::array<double, kRandomDraws> random_f1{};
  };
  std::vector<EpochTask> tasks(n_epochs);
  for (std::size_t e = 0; e < n_epochs; ++e) {
    tasks[e].bad_seeds =
        identify_bad_seeds(dynamics, criteria, track_from + static_cast<int>(e));
  }

  auto train_without = [&](const std::vector<corpus::Sample>& remaining) {
    const auto model = classifier.fit(remaining, config, nullptr);
    return learner::evaluate_classifier(classifier, *model, bundle.test).first;
  };
  auto remaining_after = [&](const std::unordered_set<std::string_view>& drop) {
    std::vector<corpus::Sample> remaining;
    remaining.reserve(bundle.train.size() - drop.size());
    for (const auto& sample : bundle.train) {
      if (!drop.contains(sample.id)) remaining.push_back(sample);
    }
    return remaining;
  };
  auto has_both_classes = [](const std::vector<corpus::Sample>& samples) {
    bool has[2] = {false, false};
    for (const auto& s : samples) {
      if (s.label.has_value()) has[*s.label] = true;
    }
    return has[0] && has[1];
  };

  // one unit of work per (epoch, variant): variant 0 is the guided removal,
  // 1..5 the random-removal controls
  const std::size_t variants = 1 + kRandomDraws;
  parallel_for(n_epochs * variants, jobs, [&](std::size_t task_index) {
    const std::size_t e = task_index / variants;
    const std::size_t variant = task_index % variants;
    EpochTask& task = tasks[e];
    const std::size_t removed = task.bad_seeds.sample_ids.size();
    if (removed == 0) {
      // removing nothing reproduces the baseline training run exactly
      if (variant == 0) {
        task.f1_after_removal = baseline_f1;
      } else {
        task.random_f1[variant - 1] = baseline_f1;
      }
      return;
    }
    if (variant == 0) {
      std::unordered_set<std::string_view> drop;
      for (const auto& id : task.bad_seeds.sample_ids) drop.insert(id);
      const auto remaining = remaining_after(drop);
      if (remaining.empty() || !has_both_classes(remaining)) {
        task.feasible = false;
        return;
      }
      task.f1_after_removal = train_without(remaining);
    } else {
      const int epoch = track_from + static_cast<int>(e);
      Rng rng(derive_seed(derive_seed(config.rng_seed, "sweep-random",
                                      static_cast<std::uint64_t>(epoch)),
                          "draw", variant - 1));
      const auto picks =
          rng.sample_without_replacement(bundle.train.size(), removed);
      std::unordered_set<std::string_view> drop;
      for (const auto i : picks) drop.insert(bundle.train[i].id);
      const auto remaining = remaining_after(drop);
      if (remaining.empty() || !has_both_classes(remaining)) {
        task.random_f1[variant - 1] = 0.0;
        return;
      }
      task.random_f1[variant - 1] = train_without(remaining);
    }
  });

  EpochSweepReport report;
  report.baseline_f1 = baseline_f1;
  report.rows.reserve(n_epochs);
  int winner = 0;
  double winner_f1 = -1.0;
  for (std::size_t e = 0; e < n_epochs; ++e) {
    const EpochTask& task = tasks[e];
    EpochSweepRow row;
    row.epoch = track_from + static_cast<int>(e);
    row.bad_seed_count = task.bad_seeds.sample_ids.size();
    row.feasible = task.feasible;
    row.f1_after_removal = task.feasible ? task.f1_after_removal : 0.0;
    double random_sum = 0.0;
    for (const double f1 : task.random_f1) random_sum += f1;
    row.random_removal_f1_mean = random_sum / kRandomDraws;
    report.rows.push_back(row);
    if (task.feasible && row.f1_after_removal > winner_f1) {
      winner_f1 = row.f1_after_removal;
      winner = row.epoch;
    }
  }
  if (winner == 0) {
    throw ValidationError(
        "epoch_sweep_removal: every epoch's removal emptied a class");
  }
  report.winning_epoch = winner;
  report.winning_bad_seeds =
      tasks[static_cast<std::size_t>(winner - track_from)].bad_seeds;
  return report;
}

EpochSweepReport epoch_sweep_removal(const corpus::CorpusBundle& bundle,
                                     const learner::LearnerConfig& config,
                                     const BadSeedCriteria& criteria, int jobs,
                                     std::size_t feature_dimension) {
  const auto state = features::fit_featurizer(bundle.train, feature_dimension);
  const learner::LogisticClassifier classifier(state);
  return epoch_sweep_removal(bundle, classifier, config, criteria, jobs);
}

}  // namespace seedmap::cartography
