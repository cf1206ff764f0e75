#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seedmap::corpus {

/// One code function. `label` is 1 for the positive class, 0 for the
/// negative class, and absent in unlabeled pools. `noise_flag` marks labels
/// flipped by inject_label_noise; it is experiment metadata and is never
/// written into training files.
struct Sample {
  std::string id;
  std::string code;
  std::optional<int> label;
  bool noise_flag = false;
};

enum class Format { jsonl, csv };

/// Resolves "jsonl"/"csv", or infers from a path's extension when the
/// name is "auto".
Format parse_format(std::string_view name, std::string_view path = "");

struct SplitSpec {
  double train_frac = 0.8;
  double valid_frac = 0.1;
  double test_frac = 0.1;
  std::uint64_t rng_seed = 0;

  void validate() const;  // fractions positive and summing to 1 within 1e-9
};

struct Provenance {
  std::string source;
  std::uint64_t split_seed = 0;
};

/// Disjoint train/valid/test parts. valid and test keep the source class
/// distribution; train is balanced only when rebuilt via balance_training.
struct CorpusBundle {
  std::vector<Sample> train;
  std::vector<Sample> valid;
  std::vector<Sample> test;
  Provenance provenance;
};

/// Reads a corpus file. JSONL records carry exactly the keys id, code and
/// an optional integer label in {0,1}; CSV files carry a header row
/// "id,code,label" (or "id,code") with RFC 4180 quoting, an empty label
/// cell meaning unlabeled. Errors name the offending line; duplicate ids
/// are rejected.
std::vector<Sample> load_corpus(const std::string& path, Format format);

/// Writes {id, code, label} JSONL, one object per line. noise_flag is
/// deliberately not part of the schema.
void save_jsonl(std::span<const Sample> samples, const std::string& path);

/// Random split into two halves whose sizes differ by at most one.
/// Each half keeps the input order of its members.
std::pair<std::vector<Sample>, std::vector<Sample>> split_halves(
    std::span<const Sample> samples, std::uint64_t rng_seed);

/// Stratified split: each class is partitioned separately so valid and
/// test retain the source class distribution. Requires labels on every
/// sample and both classes present.
CorpusBundle split_train_valid_test(std::span<const Sample> samples,
                                    const SplitSpec& spec,
                                    std::string source_name = "");

/// Keeps all positives plus an equal-size random draw of negatives.
/// Errors when negatives are scarcer than positives.
std::vector<Sample> balance_training(std::span<const Sample> train,
                                     std::uint64_t rng_seed);

/// Flips exactly round(flip_frac * n) labels, chosen uniformly without
/// replacement, toggling noise_flag on each. Applying the same seed twice
/// restores the original labels.
std::vector<Sample> inject_label_noise(std::span<const Sample> samples,
                                       double flip_frac,
                                       std::uint64_t rng_seed);

/// Vocabulary shape of the synthetic corpus: two disjoint per-class signal
/// vocabularies on top of a shared background vocabulary. A decoy_fraction
/// above zero additionally plants hard-to-learn samples whose signal slots
/// mix a shared decoy vocabulary with weak signal from the opposite class,
/// so their labels contradict their features while staying recognizable in
/// token space.
struct SyntheticSpec {
  std::size_t signal_tokens_per_class = 30;
  std::size_t background_tokens = 500;
  std::size_t min_tokens = 40;
  std::size_t max_tokens = 200;
  double signal_fraction = 0.15;
  double decoy_fraction = 0.0;

  void validate() const;
};

/// Generates 2 * n_per_class code-like samples with alternating classes.
/// Every token slot draws from the sample's class signal vocabulary with
/// probability signal_fraction, from the background otherwise, so a linear
/// model over token features learns the task well but not perfectly.
std::vector<Sample> generate_synthetic_corpus(std::size_t n_per_class,
                                              const SyntheticSpec& spec,
                                              std::uint64_t rng_seed);

}  // namespace seedmap::corpus
