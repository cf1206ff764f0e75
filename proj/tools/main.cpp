// seedmap: training-dynamics dataset maps and bad-seed-aware active
// learning for binary code-classification corpora.
//
// Subcommands: synth, split, map, sweep, al, fractions, compare.
// All randomness flows from --seed through named derivations (split,
// balance, train, ...), so any stage can be reproduced in isolation.
// Output files are byte-identical across reruns with identical flags.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedmap/cartography.hpp"
#include "seedmap/corpus.hpp"
#include "seedmap/csv.hpp"
#include "seedmap/error.hpp"
#include "seedmap/features.hpp"
#include "seedmap/harness.hpp"
#include "seedmap/metrics.hpp"
#include "seedmap/rng.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace seedmap;

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

std::string error_line(const std::string& type, const std::string& message) {
  ordered_json j;
  j["error"] = ordered_json{{"type", type}, {"message", message}};
  return j.dump();
}

// shared flag bundles ------------------------------------------------------

struct DataFlags {
  std::string path;
  std::string format = "auto";
  bool balance = true;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--data", flags.path, "input corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", flags.format, "corpus format: jsonl, csv or auto")
      ->check(CLI::IsMember({"jsonl", "csv", "auto"}))
      ->capture_default_str();
  cmd->add_flag("--balance,!--no-balance", flags.balance,
                "balance the training split (all positives plus an equal "
                "number of negatives)")
      ->capture_default_str();
}

struct LearnerFlags {
  int epochs = 10;
  double learning_rate = 0.1;
  int batch_size = 32;
  double l2_penalty = 1e-4;
  std::size_t dimension = features::kDefaultDimension;
};

void add_learner_flags(CLI::App* cmd, LearnerFlags& flags) {
  cmd->add_option("--epochs", flags.epochs, "training epochs")
      ->capture_default_str();
  cmd->add_option("--learning-rate", flags.learning_rate, "SGD learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", flags.batch_size, "mini-batch size")
      ->capture_default_str();
  cmd->add_option("--l2", flags.l2_penalty, "L2 penalty")
      ->capture_default_str();
  cmd->add_option("--dim", flags.dimension, "hashed feature dimension")
      ->capture_default_str();
}

struct CriteriaFlags {
  double tau_confidence = 0.3;
  double tau_variability = 0.4;
  int track_from = 3;
};

void add_criteria_flags(CLI::App* cmd, CriteriaFlags& flags) {
  cmd->add_option("--tau-confidence", flags.tau_confidence,
                  "bad-seed confidence threshold")
      ->capture_default_str();
  cmd->add_option("--tau-variability", flags.tau_variability,
                  "bad-seed variability threshold")
      ->capture_default_str();
  cmd->add_option("--track-from", flags.track_from,
                  "first epoch included in the dynamics statistics")
      ->capture_default_str();
}

learner::LearnerConfig to_learner_config(const LearnerFlags& flags,
                                         std::uint64_t rng_seed) {
  learner::LearnerConfig config;
  config.epochs = flags.epochs;
  config.learning_rate = flags.learning_rate;
  config.batch_size = flags.batch_size;
  config.l2_penalty = flags.l2_penalty;
  config.rng_seed = rng_seed;
  return config;
}

cartography::BadSeedCriteria to_criteria(const CriteriaFlags& flags) {
  cartography::BadSeedCriteria criteria;
  criteria.confidence_threshold = flags.tau_confidence;
  criteria.variability_threshold = flags.tau_variability;
  criteria.track_from_epoch = flags.track_from;
  return criteria;
}

ordered_json learner_flags_json(const LearnerFlags& flags) {
  return ordered_json{{"epochs", flags.epochs},
                      {"learning_rate", flags.learning_rate},
                      {"batch_size", flags.batch_size},
                      {"l2_penalty", flags.l2_penalty},
                      {"dim", flags.dimension}};
}

ordered_json criteria_flags_json(const CriteriaFlags& flags) {
  return ordered_json{{"tau_confidence", flags.tau_confidence},
                      {"tau_variability", flags.tau_variability},
                      {"track_from", flags.track_from}};
}

// loads a corpus and applies the shared split/balance preprocessing
corpus::CorpusBundle prepare_bundle(const DataFlags& data, std::uint64_t seed) {
  const auto samples = corpus::load_corpus(
      data.path, corpus::parse_format(data.format, data.path));
  corpus::SplitSpec spec;
  spec.rng_seed = derive_seed(seed, "split");
  auto bundle = corpus::split_train_valid_test(samples, spec, data.path);
  if (data.balance) {
    bundle.train =
        corpus::balance_training(bundle.train, derive_seed(seed, "balance"));
  }
  return bundle;
}

void write_config_manifest(const std::string& path, const ordered_json& config) {
  write_text_file(path, config.dump(2) + "\n");
}

// class-ratio and token-length statistics of a bad-seed set against its
// training pool; skipped when the set is empty
void write_profile(const std::vector<std::string>& bad_seed_ids,
                   const std::vector<corpus::Sample>& reference,
                   const std::string& path) {
  if (bad_seed_ids.empty()) return;
  const auto profile = metrics::profile_bad_seeds(bad_seed_ids, reference);
  ordered_json j;
  j["count"] = profile.count;
  j["class_ratio"] = ordered_json{{"0", profile.class_ratio[0]},
                                  {"1", profile.class_ratio[1]}};
  j["mean_token_length"] = ordered_json{
      {"bad_seeds", ordered_json{{"all", profile.bad_seed_mean_token_length_all},
                                 {"0", profile.bad_seed_mean_token_length[0]},
                                 {"1", profile.bad_seed_mean_token_length[1]}}},
      {"reference",
       ordered_json{{"all", profile.reference_mean_token_length_all},
                    {"0", profile.reference_mean_token_length[0]},
                    {"1", profile.reference_mean_token_length[1]}}}};
  write_text_file(path, j.dump(2) + "\n");
}

// synth ---------------------------------------------------------------------

struct SynthArgs {
  std::size_t n_per_class = 500;
  double noise = 0.0;
  std::uint64_t seed = 42;
  std::string out = "corpus.jsonl";
  corpus::SyntheticSpec spec;
};

void run_synth(const SynthArgs& args) {
  auto samples = corpus::generate_synthetic_corpus(args.n_per_class, args.spec,
                                                   derive_seed(args.seed, "synth"));
  if (args.noise > 0.0) {
    samples = corpus::inject_label_noise(samples, args.noise,
                                         derive_seed(args.seed, "noise"));
  }
  corpus::save_jsonl(samples, args.out);

  // noise truth lives in a sidecar so learners cannot see it
  fs::path out_path(args.out);
  const auto stem = (out_path.parent_path() / out_path.stem()).string();
  std::ofstream truth(stem + ".truth.jsonl", std::ios::binary);
  if (!truth) throw IoError("cannot write " + stem + ".truth.jsonl");
  std::size_t flipped = 0;
  for (const auto& sample : samples) {
    if (!sample.noise_flag) continue;
    ordered_json row;
    row["id"] = sample.id;
    row["noise_flag"] = true;
    row["original_label"] = 1 - *sample.label;
    truth << row.dump() << '\n';
    ++flipped;
  }
  truth.close();

  ordered_json config{{"command", "synth"},
                      {"n_per_class", args.n_per_class},
                      {"noise", args.noise},
                      {"seed", args.seed},
                      {"signal_tokens", args.spec.signal_tokens_per_class},
                      {"background_tokens", args.spec.background_tokens},
                      {"min_tokens", args.spec.min_tokens},
                      {"max_tokens", args.spec.max_tokens},
                      {"signal_frac", args.spec.signal_fraction},
                      {"decoy_frac", args.spec.decoy_fraction},
                      {"out", args.out}};
  write_config_manifest(stem + ".config.json", config);
  std::cout << "synth: wrote " << samples.size() << " samples to " << args.out
            << " (" << flipped << " flipped labels in sidecar)\n";
}

// split ---------------------------------------------------------------------

struct SplitArgs {
  DataFlags data;
  std::uint64_t seed = 42;
  std::string out = "split_out";
};

void run_split(const SplitArgs& args) {
  const auto samples = corpus::load_corpus(
      args.data.path, corpus::parse_format(args.data.format, args.data.path));
  const auto [s1, s2] =
      corpus::split_halves(samples, derive_seed(args.seed, "halves"));
  fs::create_directories(args.out);
  corpus::save_jsonl(s1, (fs::path(args.out) / "s1.jsonl").string());
  corpus::save_jsonl(s2, (fs::path(args.out) / "s2.jsonl").string());
  ordered_json config{{"command", "split"},
                      {"data", args.data.path},
                      {"seed", args.seed},
                      {"s1_size", s1.size()},
                      {"s2_size", s2.size()}};
  write_config_manifest((fs::path(args.out) / "split_config.json").string(),
                        config);
  std::cout << "split: |S1| = " << s1.size() << ", |S2| = " << s2.size()
            << " -> " << args.out << "\n";
}

// map -----------------------------------------------------------------------

struct MapArgs {
  DataFlags data;
  LearnerFlags learner;
  CriteriaFlags criteria;
  int as_of_epoch = 0;  // 0 means the final epoch
  std::uint64_t seed = 42;
  std::string out = "map_out";
};

ordered_json map_config_json(const MapArgs& args, int as_of) {
  ordered_json config{{"command", "map"},
                      {"data", args.data.path},
                      {"balance", args.data.balance},
                      {"seed", args.seed},
                      {"as_of_epoch", as_of}};
  config["learner"] = learner_flags_json(args.learner);
  config["criteria"] = criteria_flags_json(args.criteria);
  return config;
}

void run_map(const MapArgs& args) {
  const auto bundle = prepare_bundle(args.data, args.seed);
  const auto state =
      features::fit_featurizer(bundle.train, args.learner.dimension);
  const auto learner_config =
      to_learner_config(args.learner, derive_seed(args.seed, "train"));
  const auto outcome =
      learner::train_with_dynamics(bundle.train, learner_config, state);

  const int as_of = args.as_of_epoch == 0 ? learner_config.epochs : args.as_of_epoch;
  const auto criteria = to_criteria(args.criteria);
  const auto entries = cartography::build_map(outcome.dynamics, criteria, as_of);
  const auto bad_seeds =
      cartography::identify_bad_seeds(outcome.dynamics, criteria, as_of);

  fs::create_directories(args.out);
  const auto config = map_config_json(args, as_of);
  const std::vector<std::string> comments = {"config: " + config.dump()};
  cartography::export_map(entries, (fs::path(args.out) / "map.csv").string(),
                          comments);

  std::string id_lines;
  for (const auto& id : bad_seeds.sample_ids) id_lines += id + "\n";
  write_text_file((fs::path(args.out) / "bad_seed_ids.txt").string(), id_lines);

  std::vector<corpus::Sample> bad_samples;
  {
    std::unordered_map<std::string_view, const corpus::Sample*> by_id;
    for (const auto& sample : bundle.train) by_id.emplace(sample.id, &sample);
    for (const auto& id : bad_seeds.sample_ids) {
      bad_samples.push_back(*by_id.at(id));
    }
  }
  corpus::save_jsonl(bad_samples,
                     (fs::path(args.out) / "bad_seeds.jsonl").string());
  write_profile(bad_seeds.sample_ids, bundle.train,
                (fs::path(args.out) / "bad_seed_profile.json").string());
  write_config_manifest((fs::path(args.out) / "map_config.json").string(),
                        config);
  std::cout << "map: " << entries.size() << " samples mapped, "
            << bad_seeds.sample_ids.size() << " bad seeds at epoch " << as_of
            << " -> " << args.out << "\n";
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
  DataFlags data;
  LearnerFlags learner;
  CriteriaFlags criteria;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out = "sweep_out";
};

void run_sweep(const SweepArgs& args) {
  const auto bundle = prepare_bundle(args.data, args.seed);
  const auto learner_config =
      to_learner_config(args.learner, derive_seed(args.seed, "train"));
  const auto criteria = to_criteria(args.criteria);
  const auto report = cartography::epoch_sweep_removal(
      bundle, learner_config, criteria, args.jobs, args.learner.dimension);

  ordered_json config{{"command", "sweep"}, {"data", args.data.path},
                      {"balance", args.data.balance}, {"seed", args.seed},
                      {"jobs", args.jobs}};
  config["learner"] = learner_flags_json(args.learner);
  config["criteria"] = criteria_flags_json(args.criteria);

  std::string csv_text = "# config: " + config.dump() + "\n";
  csv_text +=
      "epoch,bad_seed_count,feasible,f1_after_removal,"
      "random_removal_f1_mean,baseline_f1,is_winner\n";
  for (const auto& row : report.rows) {
    csv_text += std::to_string(row.epoch) + "," +
                std::to_string(row.bad_seed_count) + "," +
                (row.feasible ? "1" : "0") + "," +
                fixed6(row.f1_after_removal) + "," +
                fixed6(row.random_removal_f1_mean) + "," +
                fixed6(report.baseline_f1) + "," +
                (row.epoch == report.winning_epoch ? "1" : "0") + "\n";
  }
  fs::create_directories(args.out);
  write_text_file((fs::path(args.out) / "epoch_sweep.csv").string(), csv_text);

  std::string id_lines;
  for (const auto& id : report.winning_bad_seeds.sample_ids) id_lines += id + "\n";
  write_text_file((fs::path(args.out) / "winning_bad_seed_ids.txt").string(),
                  id_lines);
  std::vector<corpus::Sample> bad_samples;
  {
    std::unordered_map<std::string_view, const corpus::Sample*> by_id;
    for (const auto& sample : bundle.train) by_id.emplace(sample.id, &sample);
    for (const auto& id : report.winning_bad_seeds.sample_ids) {
      bad_samples.push_back(*by_id.at(id));
    }
  }
  corpus::save_jsonl(bad_samples,
                     (fs::path(args.out) / "winning_bad_seeds.jsonl").string());
  write_profile(report.winning_bad_seeds.sample_ids, bundle.train,
                (fs::path(args.out) / "bad_seed_profile.json").string());
  write_config_manifest((fs::path(args.out) / "sweep_config.json").string(),
                        config);
  std::cout << "sweep: winning epoch " << report.winning_epoch << " ("
            << report.winning_bad_seeds.sample_ids.size()
            << " bad seeds), baseline F1 " << fixed6(report.baseline_f1)
            << " -> " << args.out << "\n";
}

// al ------------------------------------------------------------------------

struct AlArgs {
  DataFlags data;
  LearnerFlags learner;
  std::string bad_seeds_path;
  std::string fit_corpus_path;
  std::string arm = "standard";
  std::string strategy = "deepgini";
  std::size_t init_size = 500;
  std::size_t budget = 100;
  int iterations = 10;
  double drop_frac = 0.2;
  int random_repeats = 5;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out = "al_out";
};

void run_al(const AlArgs& args) {
  auto bundle = prepare_bundle(args.data, args.seed);

  // the featurizer is fitted once, on --fit-corpus when given (typically the
  // dataset the bad seeds came from), so bad seeds and pool share one space
  std::vector<corpus::Sample> fit_pool;
  if (!args.fit_corpus_path.empty()) {
    DataFlags fit_flags;
    fit_flags.path = args.fit_corpus_path;
    fit_flags.format = "auto";
    fit_flags.balance = args.data.balance;
    fit_pool = prepare_bundle(fit_flags, args.seed).train;
  }
  const auto state = features::fit_featurizer(
      fit_pool.empty() ? bundle.train : fit_pool, args.learner.dimension);

  std::vector<corpus::Sample> bad_seeds;
  if (!args.bad_seeds_path.empty()) {
    bad_seeds = corpus::load_corpus(args.bad_seeds_path, corpus::Format::jsonl);
  }

  harness::ALConfig config;
  config.initial_seed_size = args.init_size;
  config.budget_per_iter = args.budget;
  config.iterations = args.iterations;
  config.arm = harness::parse_arm(args.arm);
  config.strategy = config.arm == harness::Arm::random
                        ? acquisition::Strategy::random
                        : acquisition::parse_strategy(args.strategy);
  config.filter.budget = args.budget;
  config.filter.drop_frac = args.drop_frac;
  config.learner = to_learner_config(args.learner, args.seed);
  config.rng_seed = args.seed;
  config.random_repeats = args.random_repeats;
  config.jobs = args.jobs;

  const auto report =
      harness::run_active_learning(bundle, bad_seeds, state, config);

  fs::create_directories(args.out);
  harness::save_report(report, (fs::path(args.out) / "run_report.json").string());

  ordered_json curve_config{{"command", "al"},
                            {"data", args.data.path},
                            {"balance", args.data.balance},
                            {"arm", args.arm},
                            {"strategy",
                             std::string(acquisition::to_string(config.strategy))},
                            {"bad_seeds", args.bad_seeds_path},
                            {"fit_corpus", args.fit_corpus_path},
                            {"init_size", args.init_size},
                            {"budget", args.budget},
                            {"iterations", args.iterations},
                            {"drop_frac", args.drop_frac},
                            {"random_repeats", args.random_repeats},
                            {"seed", args.seed},
                            {"jobs", args.jobs}};
  curve_config["learner"] = learner_flags_json(args.learner);
  std::string csv_text = "# config: " + curve_config.dump() + "\n";
  csv_text += "iteration,labeled_count,macro_f1,accuracy\n";
  for (const auto& record : report.iterations) {
    csv_text += std::to_string(record.iteration) + "," +
                std::to_string(record.labeled_count) + "," +
                fixed6(record.macro_f1) + "," + fixed6(record.accuracy) + "\n";
  }
  write_text_file((fs::path(args.out) / "learning_curve.csv").string(), csv_text);

  std::cout << "al(" << args.arm << "): final labeled "
            << report.iterations.back().labeled_count << ", final F1 "
            << fixed6(report.iterations.back().macro_f1)
            << (report.truncated ? " [truncated]" : "") << " -> " << args.out
            << "\n";
}

// fractions -------------------------------------------------------------------

struct FractionsArgs {
  DataFlags data;
  LearnerFlags learner;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out = "fractions.csv";
};

void run_fractions(const FractionsArgs& args) {
  const auto bundle = prepare_bundle(args.data, args.seed);
  const auto learner_config =
      to_learner_config(args.learner, derive_seed(args.seed, "train"));
  const auto rows = harness::run_fraction_sweep(bundle, learner_config, args.jobs,
                                                args.learner.dimension);

  ordered_json config{{"command", "fractions"}, {"data", args.data.path},
                      {"balance", args.data.balance}, {"seed", args.seed},
                      {"jobs", args.jobs}};
  config["learner"] = learner_flags_json(args.learner);
  std::string csv_text = "# config: " + config.dump() + "\n";
  csv_text += "fraction,train_size,macro_f1,accuracy,is_max_f1,is_max_accuracy\n";
  for (const auto& row : rows) {
    char fraction[16];
    std::snprintf(fraction, sizeof(fraction), "%.1f", row.fraction);
    csv_text += std::string(fraction) + "," + std::to_string(row.train_size) +
                "," + fixed6(row.macro_f1) + "," + fixed6(row.accuracy) + "," +
                (row.is_max_f1 ? "1" : "0") + "," +
                (row.is_max_accuracy ? "1" : "0") + "\n";
  }
  write_text_file(args.out, csv_text);
  std::cout << "fractions: 10 rows -> " << args.out << "\n";
}

// compare ---------------------------------------------------------------------

struct CompareArgs {
  std::string random_path;
  std::string standard_path;
  std::string proposed_path;
  std::string out = "comparison.csv";
};

void run_compare(const CompareArgs& args) {
  const auto random_report = harness::load_report(args.random_path);
  const auto standard_report = harness::load_report(args.standard_path);
  const auto proposed_report = harness::load_report(args.proposed_path);
  if (random_report.config.arm != harness::Arm::random ||
      standard_report.config.arm != harness::Arm::standard ||
      proposed_report.config.arm != harness::Arm::proposed) {
    throw ConfigError("--random/--standard/--proposed must name reports of "
                      "the matching arms");
  }
  const auto rows =
      harness::compare_reports(random_report, standard_report, proposed_report);

  ordered_json config{{"command", "compare"},
                      {"random", args.random_path},
                      {"standard", args.standard_path},
                      {"proposed", args.proposed_path}};
  std::string csv_text = "# config: " + config.dump() + "\n";
  csv_text += "comparison,t_statistic,p_value,mean_improvement_pct\n";
  for (const auto& row : rows) {
    csv_text += row.pairing + "," + fixed6(row.t_test.t_statistic) + "," +
                fixed6(row.t_test.p_value) + "," +
                fixed6(row.mean_improvement_pct) + "\n";
  }
  write_text_file(args.out, csv_text);
  std::cout << "compare: " << rows.size() << " pairings -> " << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dataset maps and bad-seed-aware active learning"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic labeled corpus (JSONL plus noise sidecar)");
  synth_cmd->add_option("--n", synth.n_per_class, "samples per class")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "label flip fraction")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "master seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output JSONL path")
      ->capture_default_str();
  synth_cmd->add_option("--signal-tokens", synth.spec.signal_tokens_per_class,
                        "signal vocabulary size per class")
      ->capture_default_str();
  synth_cmd->add_option("--background-tokens", synth.spec.background_tokens,
                        "shared background vocabulary size")
      ->capture_default_str();
  synth_cmd->add_option("--min-tokens", synth.spec.min_tokens,
                        "minimum tokens per sample")
      ->capture_default_str();
  synth_cmd->add_option("--max-tokens", synth.spec.max_tokens,
                        "maximum tokens per sample")
      ->capture_default_str();
  synth_cmd->add_option("--signal-frac", synth.spec.signal_fraction,
                        "fraction of tokens drawn from the class signal")
      ->capture_default_str();
  synth_cmd->add_option("--decoy-frac", synth.spec.decoy_fraction,
                        "fraction of samples planted as label-noise decoys")
      ->capture_default_str();
  synth_cmd->callback([&] { run_synth(synth); });

  SplitArgs split;
  auto* split_cmd =
      app.add_subcommand("split", "split a corpus into two equal halves");
  add_data_flags(split_cmd, split.data);
  split_cmd->add_option("--seed", split.seed, "master seed")->capture_default_str();
  split_cmd->add_option("--out", split.out, "output directory")
      ->capture_default_str();
  split_cmd->callback([&] { run_split(split); });

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand(
      "map", "train with dynamics and export the dataset map plus bad seeds");
  add_data_flags(map_cmd, map_args.data);
  add_learner_flags(map_cmd, map_args.learner);
  add_criteria_flags(map_cmd, map_args.criteria);
  map_cmd->add_option("--as-of-epoch", map_args.as_of_epoch,
                      "epoch the map is computed at (0 = final epoch)")
      ->capture_default_str();
  map_cmd->add_option("--seed", map_args.seed, "master seed")
      ->capture_default_str();
  map_cmd->add_option("--out", map_args.out, "output directory")
      ->capture_default_str();
  map_cmd->callback([&] { run_map(map_args); });

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "per-epoch bad-seed removal sweep with random-removal control");
  add_data_flags(sweep_cmd, sweep.data);
  add_learner_flags(sweep_cmd, sweep.learner);
  add_criteria_flags(sweep_cmd, sweep.criteria);
  sweep_cmd->add_option("--seed", sweep.seed, "master seed")->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "parallel retrains")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "output directory")
      ->capture_default_str();
  sweep_cmd->callback([&] { run_sweep(sweep); });

  AlArgs al;
  auto* al_cmd = app.add_subcommand("al", "run one active-learning arm");
  add_data_flags(al_cmd, al.data);
  add_learner_flags(al_cmd, al.learner);
  al_cmd->add_option("--arm", al.arm, "random, standard or proposed")
      ->check(CLI::IsMember({"random", "standard", "proposed"}))
      ->capture_default_str();
  al_cmd->add_option("--strategy", al.strategy, "deepgini or kmeans")
      ->check(CLI::IsMember({"deepgini", "kmeans"}))
      ->capture_default_str();
  al_cmd->add_option("--bad-seeds", al.bad_seeds_path,
                     "bad-seed samples (JSONL), required for the proposed arm")
      ->check(CLI::ExistingFile);
  al_cmd->add_option("--fit-corpus", al.fit_corpus_path,
                     "corpus whose training split fits the featurizer "
                     "(defaults to --data)")
      ->check(CLI::ExistingFile);
  al_cmd->add_option("--init-size", al.init_size, "initial seed-set size")
      ->capture_default_str();
  al_cmd->add_option("--budget", al.budget, "labels added per iteration")
      ->capture_default_str();
  al_cmd->add_option("--iterations", al.iterations, "active-learning iterations")
      ->capture_default_str();
  al_cmd->add_option("--drop-frac", al.drop_frac,
                     "fraction of candidates dropped by the bad-seed filter")
      ->capture_default_str();
  al_cmd->add_option("--random-repeats", al.random_repeats,
                     "sub-runs of the random arm")
      ->capture_default_str();
  al_cmd->add_option("--seed", al.seed, "master seed")->capture_default_str();
  al_cmd->add_option("--jobs", al.jobs, "parallel sub-runs")->capture_default_str();
  al_cmd->add_option("--out", al.out, "output directory")->capture_default_str();
  al_cmd->callback([&] {
    if (al.arm == "proposed" && al.bad_seeds_path.empty()) {
      throw CLI::RequiredError("--bad-seeds (required with --arm proposed)");
    }
    run_al(al);
  });

  FractionsArgs fractions;
  auto* fractions_cmd = app.add_subcommand(
      "fractions", "train on nested 10%..100% prefixes of the training split");
  add_data_flags(fractions_cmd, fractions.data);
  add_learner_flags(fractions_cmd, fractions.learner);
  fractions_cmd->add_option("--seed", fractions.seed, "master seed")
      ->capture_default_str();
  fractions_cmd->add_option("--jobs", fractions.jobs, "parallel trainings")
      ->capture_default_str();
  fractions_cmd->add_option("--out", fractions.out, "output CSV path")
      ->capture_default_str();
  fractions_cmd->callback([&] { run_fractions(fractions); });

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "paired t-tests across random/standard/proposed run reports");
  compare_cmd->add_option("--random", compare.random_path, "random-arm report")
      ->required()
      ->check(CLI::ExistingFile);
  compare_cmd
      ->add_option("--standard", compare.standard_path, "standard-arm report")
      ->required()
      ->check(CLI::ExistingFile);
  compare_cmd
      ->add_option("--proposed", compare.proposed_path, "proposed-arm report")
      ->required()
      ->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare.out, "output CSV path")
      ->capture_default_str();
  compare_cmd->callback([&] { run_compare(compare); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("usage", e.what()) << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << error_line("config", e.what()) << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << error_line("parse", e.what()) << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << error_line("error", e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_line("internal", e.what()) << "\n";
    return 1;
  }
  return 0;
}
