#include "seedmap/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "seedmap/csv.hpp"
#include "seedmap/error.hpp"
#include "seedmap/rng.hpp"

namespace seedmap::corpus {
namespace {

constexpr double kFracTolerance = 1e-9;

void check_unique_ids(std::span<const Sample> samples,
                      const std::string& source) {
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto [it, inserted] = seen.emplace(samples[i].id, i);
    if (!inserted) {
      throw ValidationError(source + ": duplicate id \"" + samples[i].id +
                            "\" (records " + std::to_string(it->second + 1) +
                            " and " + std::to_string(i + 1) + ")");
    }
  }
}

int parse_label_int(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    throw ParseError(where + ": label must be an integer 0 or 1");
  }
  const auto label = value.get<long long>();
  if (label != 0 && label != 1) {
    throw ParseError(where + ": label must be 0 or 1, got " +
                     std::to_string(label));
  }
  return static_cast<int>(label);
}

std::vector<Sample> load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!record.is_object()) throw ParseError(where + ": expected an object");
    Sample sample;
    bool has_id = false;
    bool has_code = false;
    for (const auto& [key, value] : record.items()) {
      if (key == "id") {
        if (!value.is_string()) throw ParseError(where + ": id must be a string");
        sample.id = value.get<std::string>();
        has_id = true;
      } else if (key == "code") {
        if (!value.is_string()) {
          throw ParseError(where + ": code must be a string");
        }
        sample.code = value.get<std::string>();
        has_code = true;
      } else if (key == "label") {
        sample.label = parse_label_int(value, where);
      } else {
        throw ParseError(where + ": unexpected key \"" + key + "\"");
      }
    }
    if (!has_id) throw ParseError(where + ": missing key \"id\"");
    if (!has_code) throw ParseError(where + ": missing key \"code\"");
    samples.push_back(std::move(sample));
  }
  check_unique_ids(samples, path);
  return samples;
}

std::vector<Sample> load_csv(const std::string& path) {
  const csv::Table table = csv::parse_file(path);
  const bool labeled = table.header.size() == 3;
  const std::vector<std::string> want_labeled = {"id", "code", "label"};
  const std::vector<std::string> want_unlabeled = {"id", "code"};
  if (table.header != (labeled ? want_labeled : want_unlabeled)) {
    throw ParseError(path + ": header must be id,code,label or id,code");
  }
  std::vector<Sample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where =
        path + ":line " + std::to_string(table.row_lines[i]);
    Sample sample;
    sample.id = row[0];
    sample.code = row[1];
    if (labeled && !row[2].empty()) {
      if (row[2] == "0") {
        sample.label = 0;
      } else if (row[2] == "1") {
        sample.label = 1;
      } else {
        throw ParseError(where + ": label must be 0 or 1, got \"" + row[2] +
                         "\"");
      }
    }
    samples.push_back(std::move(sample));
  }
  check_unique_ids(samples, path);
  return samples;
}

void require_labels(std::span<const Sample> samples, std::string_view op) {
  for (const auto& s : samples) {
    if (!s.label.has_value()) {
      throw ValidationError(std::string(op) + ": sample \"" + s.id +
                            "\" has no label");
    }
  }
}

// Keeps the input order of the chosen samples.
std::vector<Sample> take_sorted(std::span<const Sample> samples,
                                std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (const auto i : indices) out.push_back(samples[i]);
  return out;
}

}  // namespace

Format parse_format(std::string_view name, std::string_view path) {
  if (name == "jsonl") return Format::jsonl;
  if (name == "csv") return Format::csv;
  if (name == "auto") {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
      return Format::csv;
    }
    return Format::jsonl;
  }
  throw ConfigError("unknown corpus format \"" + std::string(name) + "\"");
}

void SplitSpec::validate() const {
  if (train_frac <= 0 || valid_frac <= 0 || test_frac <= 0) {
    throw ConfigError("split fractions must be positive");
  }
  if (std::fabs(train_frac + valid_frac + test_frac - 1.0) > kFracTolerance) {
    throw ConfigError("split fractions must sum to 1");
  }
}

std::vector<Sample> load_corpus(const std::string& path, Format format) {
  return format == Format::jsonl ? load_jsonl(path) : load_csv(path);
}

void save_jsonl(std::span<const Sample> samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& sample : samples) {
    nlohmann::ordered_json record;
    record["id"] = sample.id;
    record["code"] = sample.code;
    if (sample.label.has_value()) record["label"] = *sample.label;
    out << record.dump() << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_halves(
    std::span<const Sample> samples, std::uint64_t rng_seed) {
  if (samples.size() < 2) {
    throw ValidationError("split_halves: need at least 2 samples");
  }
  std::vector<std::size_t> indices(samples.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(rng_seed);
  rng.shuffle(indices);
  const std::size_t first_size = (samples.size() + 1) / 2;
  std::vector<std::size_t> first(indices.begin(), indices.begin() + first_size);
  std::vector<std::size_t> second(indices.begin() + first_size, indices.end());
  return {take_sorted(samples, std::move(first)),
          take_sorted(samples, std::move(second))};
}

CorpusBundle split_train_valid_test(std::span<const Sample> samples,
                                    const SplitSpec& spec,
                                    std::string source_name) {
  spec.validate();
  require_labels(samples, "split_train_valid_test");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_class[*samples[i].label].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].empty()) {
      throw ValidationError("split_train_valid_test: class " +
                            std::to_string(c) + " absent from input");
    }
  }

  Rng rng(spec.rng_seed);
  std::vector<std::size_t> train_idx, valid_idx, test_idx;
  for (int c = 0; c < 2; ++c) {
    auto& members = by_class[c];
    rng.shuffle(members);
    const auto n = static_cast<double>(members.size());
    // cumulative rounding: parts are non-negative and sum to the class size
    const auto n_train =
        static_cast<std::size_t>(std::llround(spec.train_frac * n));
    auto n_train_valid = static_cast<std::size_t>(
        std::llround((spec.train_frac + spec.valid_frac) * n));
    n_train_valid = std::clamp(n_train_valid, n_train, members.size());
    train_idx.insert(train_idx.end(), members.begin(),
                     members.begin() + n_train);
    valid_idx.insert(valid_idx.end(), members.begin() + n_train,
                     members.begin() + n_train_valid);
    test_idx.insert(test_idx.end(), members.begin() + n_train_valid,
                    members.end());
  }
  if (train_idx.empty() || valid_idx.empty() || test_idx.empty()) {
    throw ValidationError(
        "split_train_valid_test: too few samples, a part would be empty");
  }

  CorpusBundle bundle;
  bundle.train = take_sorted(samples, std::move(train_idx));
  bundle.valid = take_sorted(samples, std::move(valid_idx));
  bundle.test = take_sorted(samples, std::move(test_idx));
  bundle.provenance = {std::move(source_name), spec.rng_seed};
  return bundle;
}

std::vector<Sample> balance_training(std::span<const Sample> train,
                                     std::uint64_t rng_seed) {
  require_labels(train, "balance_training");
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < train.size(); ++i) {
    (*train[i].label == 1 ? positives : negatives).push_back(i);
  }
  if (negatives.size() < positives.size()) {
    throw ValidationError("balance_training: fewer negatives (" +
                          std::to_string(negatives.size()) +
                          ") than positives (" +
                          std::to_string(positives.size()) + ")");
  }
  Rng rng(rng_seed);
  const auto picks =
      rng.sample_without_replacement(negatives.size(), positives.size());
  std::vector<std::size_t> chosen = positives;
  for (const auto p : picks) chosen.push_back(negatives[p]);
  return take_sorted(train, std::move(chosen));
}

std::vector<Sample> inject_label_noise(std::span<const Sample> samples,
                                       double flip_frac,
                                       std::uint64_t rng_seed) {
  if (flip_frac < 0.0 || flip_frac >= 1.0) {
    throw ConfigError("inject_label_noise: flip_frac must be in [0, 1)");
  }
  require_labels(samples, "inject_label_noise");
  std::vector<Sample> out(samples.begin(), samples.end());
  const auto flips = static_cast<std::size_t>(
      std::llround(flip_frac * static_cast<double>(out.size())));
  if (flips == 0) return out;
  Rng rng(rng_seed);
  for (const auto i : rng.sample_without_replacement(out.size(), flips)) {
    out[i].label = 1 - *out[i].label;
    out[i].noise_flag = !out[i].noise_flag;
  }
  return out;
}

void SyntheticSpec::validate() const {
  if (signal_tokens_per_class == 0 || background_tokens == 0) {
    throw ConfigError("synthetic vocabularies must be non-empty");
  }
  if (min_tokens == 0 || max_tokens < min_tokens) {
    throw ConfigError("synthetic token length range is invalid");
  }
  if (signal_fraction < 0.0 || signal_fraction > 1.0) {
    throw ConfigError("signal_fraction must be in [0, 1]");
  }
  if (decoy_fraction < 0.0 || decoy_fraction >= 1.0) {
    throw ConfigError("decoy_fraction must be in [0, 1)");
  }
}

std::vector<Sample> generate_synthetic_corpus(std::size_t n_per_class,
                                              const SyntheticSpec& spec,
                                              std::uint64_t rng_seed) {
  if (n_per_class == 0) {
    throw ConfigError("generate_synthetic_corpus: n_per_class must be >= 1");
  }
  spec.validate();

  std::vector<std::string> signal[2];
  for (std::size_t j = 0; j < spec.signal_tokens_per_class; ++j) {
    signal[0].push_back("neg_sig" + std::to_string(j));
    signal[1].push_back("pos_sig" + std::to_string(j));
  }
  // dense, class-neutral marker vocabulary shared by all decoys; small so
  // any two decoys overlap heavily in token space
  constexpr std::size_t kDecoyVocabSize = 12;
  constexpr double kDecoyMarkerRate = 0.15;
  constexpr double kDecoySignalScale = 0.6;
  std::vector<std::string> decoy;
  for (std::size_t j = 0; j < kDecoyVocabSize; ++j) {
    decoy.push_back("odd_sig" + std::to_string(j));
  }
  std::vector<std::string> background;
  background.reserve(spec.background_tokens);
  for (std::size_t j = 0; j < spec.background_tokens; ++j) {
    background.push_back("tok" + std::to_string(j));
  }

  Rng rng(rng_seed);
  std::vector<Sample> samples;
  samples.reserve(2 * n_per_class);
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const int cls = static_cast<int>(i % 2);
    const bool is_decoy = rng.next_double() < spec.decoy_fraction;
    // a decoy's weak signal comes from a coin-flip class, so its label
    // carries no information about its features: learning from decoys is
    // pure noise, and half of them train as confidently-wrong hard cases
    const int feature_cls =
        is_decoy ? static_cast<int>(rng.below(2)) : cls;
    const std::size_t length =
        spec.min_tokens +
        static_cast<std::size_t>(
            rng.below(spec.max_tokens - spec.min_tokens + 1));
    // constant wrapper: no per-sample token a learner could memorize
    std::string code = "void fn(void) {\n ";
    for (std::size_t t = 0; t < length; ++t) {
      const double u = rng.next_double();
      const auto* vocab = &background;
      if (is_decoy) {
        if (u < kDecoyMarkerRate) {
          vocab = &decoy;
        } else if (u < kDecoyMarkerRate +
                           spec.signal_fraction * kDecoySignalScale) {
          vocab = &signal[feature_cls];
        }
      } else if (u < spec.signal_fraction) {
        vocab = &signal[cls];
      }
      code.push_back(' ');
      code += (*vocab)[static_cast<std::size_t>(rng.below(vocab->size()))];
      if (t + 1 < length && (t + 1) % 8 == 0) code += "\n ";
    }
    code += "\n}\n";

    char id[32];
    std::snprintf(id, sizeof(id), "syn_%06zu", i);
    samples.push_back(Sample{id, std::move(code), cls, false});
  }
  return samples;
}

}  // namespace seedmap::corpus
