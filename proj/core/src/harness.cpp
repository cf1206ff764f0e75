#include "seedmap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "seedmap/error.hpp"
#include "seedmap/parallel.hpp"
#include "seedmap/rng.hpp"

namespace seedmap::harness {
namespace {

using nlohmann::json;

struct SingleRun {
  std::vector<IterationRecord> iterations;
  bool truncated = false;
};

std::vector<std::string> ids_of(std::span<const corpus::Sample> samples,
                                std::span<const std::size_t> indices) {
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (const auto i : indices) ids.push_back(samples[i].id);
  return ids;
}

// One arm's trajectory. select_batch receives (model, pool indices,
// iteration) and returns (kept ids, dropped ids) in selection order.
template <typename SelectBatch>
SingleRun run_single(const corpus::CorpusBundle& bundle,
                     const learner::Classifier& classifier,
                     const ALConfig& config,
                     std::span<const std::size_t> initial_indices,
                     SelectBatch&& select_batch) {
  const auto& train = bundle.train;
  std::unordered_map<std::string_view, std::size_t> index_of;
  index_of.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) index_of.emplace(train[i].id, i);

  std::vector<std::size_t> labeled(initial_indices.begin(), initial_indices.end());
  std::vector<bool> is_labeled(train.size(), false);
  for (const auto i : labeled) is_labeled[i] = true;
  std::vector<std::size_t> pool;
  pool.reserve(train.size() - labeled.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!is_labeled[i]) pool.push_back(i);
  }

  auto retrain_and_score = [&](int iteration) {
    std::vector<corpus::Sample> labeled_samples;
    labeled_samples.reserve(labeled.size());
    for (const auto i : labeled) labeled_samples.push_back(train[i]);
    learner::LearnerConfig train_config = config.learner;
    train_config.rng_seed = derive_seed(config.rng_seed, "train",
                                        static_cast<std::uint64_t>(iteration));
    auto model = classifier.fit(labeled_samples, train_config, nullptr);
    const auto [f1, acc] =
        learner::evaluate_classifier(classifier, *model, bundle.test);
    return std::tuple{std::move(model), f1, acc};
  };

  SingleRun run;
  auto [model, f1, acc] = retrain_and_score(0);
  run.iterations.push_back(IterationRecord{
      0, labeled.size(), f1, acc, ids_of(train, initial_indices), {}});

  for (int t = 1; t <= config.iterations; ++t) {
    if (pool.empty()) {
      run.truncated = true;
      break;
    }
    auto [kept_ids, dropped_ids] = select_batch(*model, pool, t);
    for (const auto& id : kept_ids) {
      const std::size_t i = index_of.at(id);
      labeled.push_back(i);
      is_labeled[i] = true;
    }
    std::erase_if(pool, [&](std::size_t i) { return is_labeled[i]; });

    auto [next_model, next_f1, next_acc] = retrain_and_score(t);
    model = std::move(next_model);
    run.iterations.push_back(IterationRecord{t, labeled.size(), next_f1,
                                             next_acc, std::move(kept_ids),
                                             std::move(dropped_ids)});
  }
  return run;
}

json learner_to_json(const learner::LearnerConfig& config) {
  return json{{"epochs", config.epochs},
              {"learning_rate", config.learning_rate},
              {"batch_size", config.batch_size},
              {"l2_penalty", config.l2_penalty},
              {"rng_seed", config.rng_seed}};
}

learner::LearnerConfig learner_from_json(const json& j) {
  learner::LearnerConfig config;
  config.epochs = j.at("epochs").get<int>();
  config.learning_rate = j.at("learning_rate").get<double>();
  config.batch_size = j.at("batch_size").get<int>();
  config.l2_penalty = j.at("l2_penalty").get<double>();
  config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return config;
}

json config_to_json(const ALConfig& config) {
  return json{{"arm", std::string(to_string(config.arm))},
              {"strategy", std::string(acquisition::to_string(config.strategy))},
              {"initial_seed_size", config.initial_seed_size},
              {"budget_per_iter", config.budget_per_iter},
              {"iterations", config.iterations},
              {"rng_seed", config.rng_seed},
              {"random_repeats", config.random_repeats},
              {"kmeans_max_iters", config.kmeans_max_iters},
              {"jobs", config.jobs},
              {"learner", learner_to_json(config.learner)},
              {"filter", json{{"drop_frac", config.filter.drop_frac},
                              {"budget", config.filter.budget},
                              {"identity_on_empty", config.filter.identity_on_empty}}}};
}

ALConfig config_from_json(const json& j) {
  ALConfig config;
  config.arm = parse_arm(j.at("arm").get<std::string>());
  config.strategy = acquisition::parse_strategy(j.at("strategy").get<std::string>());
  config.initial_seed_size = j.at("initial_seed_size").get<std::size_t>();
  config.budget_per_iter = j.at("budget_per_iter").get<std::size_t>();
  config.iterations = j.at("iterations").get<int>();
  config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  config.random_repeats = j.at("random_repeats").get<int>();
  config.kmeans_max_iters = j.at("kmeans_max_iters").get<int>();
  config.jobs = j.at("jobs").get<int>();
  config.learner = learner_from_json(j.at("learner"));
  const json& f = j.at("filter");
  config.filter.drop_frac = f.at("drop_frac").get<double>();
  config.filter.budget = f.at("budget").get<std::size_t>();
  config.filter.identity_on_empty = f.at("identity_on_empty").get<bool>();
  return config;
}

json record_to_json(const IterationRecord& record) {
  return json{{"iteration", record.iteration},
              {"labeled_count", record.labeled_count},
              {"macro_f1", record.macro_f1},
              {"accuracy", record.accuracy},
              {"selected_ids", record.selected_ids},
              {"dropped_ids", record.dropped_ids}};
}

IterationRecord record_from_json(const json& j) {
  IterationRecord record;
  record.iteration = j.at("iteration").get<int>();
  record.labeled_count = j.at("labeled_count").get<std::size_t>();
  record.macro_f1 = j.at("macro_f1").get<double>();
  record.accuracy = j.at("accuracy").get<double>();
  record.selected_ids = j.at("selected_ids").get<std::vector<std::string>>();
  record.dropped_ids = j.at("dropped_ids").get<std::vector<std::string>>();
  return record;
}

void validate_report_shape(const RunReport& report, const std::string& source) {
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    if (report.iterations[i].iteration != static_cast<int>(i)) {
      throw ValidationError(source + ": iteration records are not contiguous");
    }
    if (i > 0 && report.iterations[i].labeled_count <=
                     report.iterations[i - 1].labeled_count) {
      throw ValidationError(source + ": labeled_count is not strictly increasing");
    }
  }
}

}  // namespace

Arm parse_arm(std::string_view name) {
  if (name == "random") return Arm::random;
  if (name == "standard") return Arm::standard;
  if (name == "proposed") return Arm::proposed;
  throw ConfigError("unknown arm \"" + std::string(name) + "\"");
}

std::string_view to_string(Arm arm) {
  switch (arm) {
    case Arm::random: return "random";
    case Arm::standard: return "standard";
    case Arm::proposed: return "proposed";
  }
  return "standard";
}

void ALConfig::validate() const {
  if (initial_seed_size == 0) throw ConfigError("initial_seed_size must be >= 1");
  if (budget_per_iter == 0) throw ConfigError("budget_per_iter must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (random_repeats < 1) throw ConfigError("random_repeats must be >= 1");
  if (kmeans_max_iters < 1) throw ConfigError("kmeans_max_iters must be >= 1");
  learner.validate();
  if (arm == Arm::random) {
    if (strategy != acquisition::Strategy::random) {
      throw ConfigError("the random arm uses the random strategy");
    }
  } else if (strategy == acquisition::Strategy::random) {
    throw ConfigError("use arm=random for random selection");
  }
  if (arm == Arm::proposed) filter.validate();
}

bool operator==(const ALConfig& a, const ALConfig& b) {
  return a.initial_seed_size == b.initial_seed_size &&
         a.budget_per_iter == b.budget_per_iter && a.iterations == b.iterations &&
         a.arm == b.arm && a.strategy == b.strategy && a.filter == b.filter &&
         a.learner == b.learner && a.rng_seed == b.rng_seed &&
         a.random_repeats == b.random_repeats &&
         a.kmeans_max_iters == b.kmeans_max_iters && a.jobs == b.jobs;
}

bool operator==(const IterationRecord& a, const IterationRecord& b) {
  return a.iteration == b.iteration && a.labeled_count == b.labeled_count &&
         a.macro_f1 == b.macro_f1 && a.accuracy == b.accuracy &&
         a.selected_ids == b.selected_ids && a.dropped_ids == b.dropped_ids;
}

bool operator==(const SubRunSeries& a, const SubRunSeries& b) {
  return a.selection_seed == b.selection_seed && a.iterations == b.iterations;
}

bool operator==(const RunReport& a, const RunReport& b) {
  // wall_clock_seconds is diagnostic only
  return a.format_version == b.format_version && a.config == b.config &&
         a.iterations == b.iterations && a.sub_runs == b.sub_runs &&
         a.truncated == b.truncated;
}

RunReport run_active_learning(const corpus::CorpusBundle& bundle,
                              std::span<const corpus::Sample> bad_seeds,
                              const features::FeaturizerState& featurizer,
                              const learner::Classifier& classifier,
                              const ALConfig& config) {
  const auto start_time = std::chrono::steady_clock::now();
  config.validate();
  if (bundle.train.empty() || bundle.test.empty()) {
    throw ValidationError("run_active_learning: bundle needs train and test");
  }
  if (config.initial_seed_size > bundle.train.size()) {
    throw ConfigError("initial_seed_size exceeds the pool size");
  }
  for (const auto& sample : bundle.train) {
    if (!sample.label.has_value()) {
      throw ValidationError("run_active_learning: pool sample \"" + sample.id +
                            "\" has no oracle label");
    }
  }

  // the initial seed set depends only on rng_seed, never on the arm
  Rng init_rng(derive_seed(config.rng_seed, "init-seed-set"));
  const auto initial_indices = init_rng.sample_without_replacement(
      bundle.train.size(), config.initial_seed_size);

  const bool needs_vectors = config.arm == Arm::proposed ||
                             config.strategy == acquisition::Strategy::kmeans;
  std::vector<features::FeatureVector> train_vectors;
  if (needs_vectors) {
    train_vectors = features::vectorize_all(featurizer, bundle.train);
  }
  std::vector<features::FeatureVector> bad_seed_vectors;
  if (config.arm == Arm::proposed) {
    bad_seed_vectors.reserve(bad_seeds.size());
    for (const auto& seed : bad_seeds) {
      bad_seed_vectors.push_back(features::vectorize(featurizer, seed.code));
    }
  }

  auto score_pool = [&](const learner::Classifier::Model& model,
                        std::span<const std::size_t> pool) {
    std::vector<corpus::Sample> pool_samples;
    pool_samples.reserve(pool.size());
    for (const auto i : pool) pool_samples.push_back(bundle.train[i]);
    return classifier.predict(model, pool_samples);
  };
  auto acquire = [&](const learner::Classifier::Model& model,
                     std::span<const std::size_t> pool, std::size_t want,
                     int iteration) {
    const auto pool_ids = ids_of(bundle.train, pool);
    if (config.strategy == acquisition::Strategy::deepgini) {
      return acquisition::select_deepgini(pool_ids, score_pool(model, pool), want);
    }
    std::vector<features::FeatureVector> pool_vectors;
    pool_vectors.reserve(pool.size());
    for (const auto i : pool) pool_vectors.push_back(train_vectors[i]);
    return acquisition::select_kmeans(
        pool_ids, pool_vectors, want,
        derive_seed(config.rng_seed, "kmeans", static_cast<std::uint64_t>(iteration)),
        config.kmeans_max_iters);
  };

  RunReport report;
  report.config = config;

  if (config.arm == Arm::random) {
    std::vector<SingleRun> runs(static_cast<std::size_t>(config.random_repeats));
    std::vector<std::uint64_t> seeds(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
      seeds[r] = derive_seed(config.rng_seed, "random-arm", r);
    }
    parallel_for(runs.size(), config.jobs, [&](std::size_t r) {
      runs[r] = run_single(
          bundle, classifier, config, initial_indices,
          [&](const learner::Classifier::Model&, std::span<const std::size_t> pool,
              int iteration) {
            const auto pool_ids = ids_of(bundle.train, pool);
            const std::size_t want = std::min(config.budget_per_iter, pool.size());
            auto selection = acquisition::select_random(
                pool_ids, want,
                derive_seed(seeds[r], "iter", static_cast<std::uint64_t>(iteration)));
            return std::pair{std::move(selection.selected_ids),
                             std::vector<std::string>{}};
          });
    });

    const std::size_t n_iterations = runs[0].iterations.size();
    for (const auto& run : runs) {
      if (run.iterations.size() != n_iterations) {
        throw ValidationError("random sub-runs diverged in iteration count");
      }
    }
    for (std::size_t t = 0; t < n_iterations; ++t) {
      IterationRecord mean = runs[0].iterations[t];
      double f1_sum = 0.0, acc_sum = 0.0;
      for (const auto& run : runs) {
        f1_sum += run.iterations[t].macro_f1;
        acc_sum += run.iterations[t].accuracy;
      }
      mean.macro_f1 = f1_sum / static_cast<double>(runs.size());
      mean.accuracy = acc_sum / static_cast<double>(runs.size());
      if (t > 0) {
        // per-sub-run selections differ; ids live in sub_runs
        mean.selected_ids.clear();
        mean.dropped_ids.clear();
      }
      report.iterations.push_back(std::move(mean));
    }
    for (std::size_t r = 0; r < runs.size(); ++r) {
      report.sub_runs.push_back(
          SubRunSeries{seeds[r], std::move(runs[r].iterations)});
      report.truncated = report.truncated || runs[r].truncated;
    }
  } else if (config.arm == Arm::standard) {
    SingleRun run = run_single(
        bundle, classifier, config, initial_indices,
        [&](const learner::Classifier::Model& model,
            std::span<const std::size_t> pool, int iteration) {
          const std::size_t want = std::min(config.budget_per_iter, pool.size());
          auto selection = acquire(model, pool, want, iteration);
          return std::pair{std::move(selection.selected_ids),
                           std::vector<std::string>{}};
        });
    report.iterations = std::move(run.iterations);
    report.truncated = run.truncated;
  } else {
    std::unordered_map<std::string_view, std::size_t> index_of;
    index_of.reserve(bundle.train.size());
    for (std::size_t i = 0; i < bundle.train.size(); ++i) {
      index_of.emplace(bundle.train[i].id, i);
    }
    SingleRun run = run_single(
        bundle, classifier, config, initial_indices,
        [&](const learner::Classifier::Model& model,
            std::span<const std::size_t> pool, int iteration) {
          const std::size_t want =
              std::min(config.filter.candidate_count(), pool.size());
          auto candidates = acquire(model, pool, want, iteration);
          std::vector<features::FeatureVector> candidate_vectors;
          candidate_vectors.reserve(candidates.selected_ids.size());
          for (const auto& id : candidates.selected_ids) {
            candidate_vectors.push_back(train_vectors[index_of.at(id)]);
          }
          auto outcome = filter::filter_candidates(
              candidates, candidate_vectors, bad_seed_vectors, config.filter);
          return std::pair{std::move(outcome.kept_ids),
                           std::move(outcome.dropped_ids)};
        });
    report.iterations = std::move(run.iterations);
    report.truncated = run.truncated;
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
          .count();
  return report;
}

RunReport run_active_learning(const corpus::CorpusBundle& bundle,
                              std::span<const corpus::Sample> bad_seeds,
                              const features::FeaturizerState& featurizer,
                              const ALConfig& config) {
  const learner::LogisticClassifier classifier(featurizer);
  return run_active_learning(bundle, bad_seeds, featurizer, classifier, config);
}

std::vector<FractionRow> run_fraction_sweep(const corpus::CorpusBundle& bundle,
                                            const learner::LearnerConfig& config,
                                            int jobs,
                                            std::size_t feature_dimension) {
  config.validate();
  if (bundle.train.empty() || bundle.test.empty()) {
    throw ValidationError("run_fraction_sweep: bundle needs train and test");
  }
  const auto state = features::fit_featurizer(bundle.train, feature_dimension);

  std::vector<std::size_t> shuffled(bundle.train.size());
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i] = i;
  Rng rng(derive_seed(config.rng_seed, "fraction-shuffle"));
  rng.shuffle(shuffled);

  constexpr int kSteps = 10;
  std::vector<FractionRow> rows(kSteps);
  parallel_for(kSteps, jobs, [&](std::size_t step) {
    const double fraction = static_cast<double>(step + 1) / kSteps;
    const auto size = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               fraction * static_cast<double>(bundle.train.size()))));
    // prefix membership, corpus order: the 100% row trains on exactly
    // bundle.train
    std::vector<std::size_t> members(shuffled.begin(), shuffled.begin() + size);
    std::sort(members.begin(), members.end());
    std::vector<corpus::Sample> train;
    train.reserve(size);
    for (const auto i : members) train.push_back(bundle.train[i]);

    const auto outcome = learner::train_with_dynamics(train, config, state);
    const auto [f1, acc] = learner::evaluate(outcome.model, bundle.test, state);
    rows[step] = FractionRow{fraction, size, f1, acc, false, false};
  });

  double max_f1 = -1.0, max_acc = -1.0;
  for (const auto& row : rows) {
    max_f1 = std::max(max_f1, row.macro_f1);
    max_acc = std::max(max_acc, row.accuracy);
  }
  for (auto& row : rows) {
    row.is_max_f1 = row.macro_f1 == max_f1;
    row.is_max_accuracy = row.accuracy == max_acc;
  }
  return rows;
}

std::string report_to_json(const RunReport& report) {
  json j;
  j["format_version"] = report.format_version;
  j["config"] = config_to_json(report.config);
  json iterations = json::array();
  for (const auto& record : report.iterations) {
    iterations.push_back(record_to_json(record));
  }
  j["iterations"] = std::move(iterations);

  json summary;
  summary["truncated"] = report.truncated;
  if (!report.iterations.empty()) {
    summary["final_macro_f1"] = report.iterations.back().macro_f1;
    summary["final_accuracy"] = report.iterations.back().accuracy;
    summary["final_labeled_count"] = report.iterations.back().labeled_count;
  }
  const auto series = f1_series(report);
  double mean = 0.0;
  for (const double f1 : series) mean += f1;
  summary["mean_macro_f1"] =
      series.empty() ? 0.0 : mean / static_cast<double>(series.size());
  summary["iteration_f1_std"] =
      series.size() >= 2 ? metrics::sample_std(series) : 0.0;
  json sub_runs = json::array();
  for (const auto& sub : report.sub_runs) {
    json one;
    one["selection_seed"] = sub.selection_seed;
    json its = json::array();
    for (const auto& record : sub.iterations) its.push_back(record_to_json(record));
    one["iterations"] = std::move(its);
    sub_runs.push_back(std::move(one));
  }
  summary["sub_runs"] = std::move(sub_runs);
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!j.contains("format_version") || !j.at("format_version").is_number_integer()) {
    throw ParseError(source + ": missing format_version");
  }
  const int version = j.at("format_version").get<int>();
  if (version != kReportFormatVersion) {
    throw VersionMismatchError(source + ": report format_version " +
                               std::to_string(version) +
                               ", this build supports " +
                               std::to_string(kReportFormatVersion));
  }
  RunReport report;
  report.format_version = version;
  try {
    report.config = config_from_json(j.at("config"));
    for (const auto& record : j.at("iterations")) {
      report.iterations.push_back(record_from_json(record));
    }
    const json& summary = j.at("summary");
    report.truncated = summary.at("truncated").get<bool>();
    for (const auto& sub : summary.at("sub_runs")) {
      SubRunSeries series;
      series.selection_seed = sub.at("selection_seed").get<std::uint64_t>();
      for (const auto& record : sub.at("iterations")) {
        series.iterations.push_back(record_from_json(record));
      }
      report.sub_runs.push_back(std::move(series));
    }
  } catch (const json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  validate_report_shape(report, source);
  return report;
}

void save_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << report_to_json(report);
  if (!out) throw IoError("failed writing " + path);
}

RunReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str(), path);
}

std::vector<double> f1_series(const RunReport& report) {
  std::vector<double> series;
  for (const auto& record : report.iterations) {
    if (record.iteration >= 1) series.push_back(record.macro_f1);
  }
  return series;
}

double mean_macro_f1(const RunReport& report) {
  const auto series = f1_series(report);
  if (series.empty()) throw ValidationError("report has no budgeted iterations");
  double sum = 0.0;
  for (const double f1 : series) sum += f1;
  return sum / static_cast<double>(series.size());
}

std::vector<metrics::ArmComparison> compare_reports(const RunReport& random_mean,
                                                    const RunReport& standard_run,
                                                    const RunReport& proposed_run) {
  return metrics::compare_arms(f1_series(random_mean), f1_series(standard_run),
                               f1_series(proposed_run));
}

}  // namespace seedmap::harness
