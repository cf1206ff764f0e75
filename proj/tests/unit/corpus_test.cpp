#include <doctest.h>

#include <algorithm>
#include <set>

#include "seedmap/corpus.hpp"
#include "seedmap/error.hpp"
#include "seedmap/rng.hpp"
#include "test_util.hpp"

using namespace seedmap;
using corpus::Sample;

namespace {

std::vector<Sample> labeled_samples(std::size_t n_pos, std::size_t n_neg) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n_pos; ++i) {
    out.push_back({"p" + std::to_string(i), "int a;", 1, false});
  }
  for (std::size_t i = 0; i < n_neg; ++i) {
    out.push_back({"n" + std::to_string(i), "int b;", 0, false});
  }
  return out;
}

std::set<std::string> id_set(const std::vector<Sample>& samples) {
  std::set<std::string> ids;
  for (const auto& s : samples) ids.insert(s.id);
  return ids;
}

}  // namespace

TEST_CASE("jsonl loading") {
  testutil::TempDir dir;
  const auto path = dir.file("corpus.jsonl");

  SUBCASE("three valid rows") {
    testutil::write_file(path,
                         "{\"id\":\"a\",\"code\":\"x\",\"label\":1}\n"
                         "{\"id\":\"b\",\"code\":\"y\",\"label\":0}\n"
                         "{\"id\":\"c\",\"code\":\"z\"}\n");
    const auto samples = corpus::load_corpus(path, corpus::Format::jsonl);
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].id == "a");
    CHECK(samples[0].label == 1);
    CHECK(samples[2].id == "c");
    CHECK_FALSE(samples[2].label.has_value());
  }
  SUBCASE("duplicate id rejected") {
    testutil::write_file(path,
                         "{\"id\":\"f_1\",\"code\":\"x\",\"label\":1}\n"
                         "{\"id\":\"f_1\",\"code\":\"y\",\"label\":0}\n");
    CHECK_THROWS_AS(corpus::load_corpus(path, corpus::Format::jsonl),
                    ValidationError);
  }
  SUBCASE("malformed record names the line") {
    testutil::write_file(path,
                         "{\"id\":\"a\",\"code\":\"x\",\"label\":1}\n"
                         "{\"id\":\"b\",\n");
    try {
      corpus::load_corpus(path, corpus::Format::jsonl);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("unexpected key rejected") {
    testutil::write_file(path, "{\"id\":\"a\",\"code\":\"x\",\"extra\":3}\n");
    CHECK_THROWS_AS(corpus::load_corpus(path, corpus::Format::jsonl), ParseError);
  }
  SUBCASE("label outside {0,1} rejected") {
    testutil::write_file(path, "{\"id\":\"a\",\"code\":\"x\",\"label\":2}\n");
    CHECK_THROWS_AS(corpus::load_corpus(path, corpus::Format::jsonl), ParseError);
  }
}

TEST_CASE("csv loading round-trips a hand-written fixture") {
  testutil::TempDir dir;
  const auto path = dir.file("corpus.csv");
  // 10 rows; exercises quoting, embedded commas, quotes and newlines
  std::string fixture = "id,code,label\n";
  fixture += "r0,int main() { return 0; },0\n";
  fixture += "r1,\"call(a, b)\",1\n";
  fixture += "r2,\"say \"\"hi\"\"\",0\n";
  fixture += "r3,\"line1\nline2\",1\n";
  fixture += "r4,plain,0\n";
  fixture += "r5,\"tail,comma\",1\n";
  fixture += "r6,x,0\n";
  fixture += "r7,y,1\n";
  fixture += "r8,z,0\n";
  fixture += "r9,w,1\n";
  testutil::write_file(path, fixture);

  const auto samples = corpus::load_corpus(path, corpus::Format::csv);
  REQUIRE(samples.size() == 10);
  CHECK(samples[0].id == "r0");
  CHECK(samples[0].code == "int main() { return 0; }");
  CHECK(samples[0].label == 0);
  CHECK(samples[1].code == "call(a, b)");
  CHECK(samples[2].code == "say \"hi\"");
  CHECK(samples[3].code == "line1\nline2");
  CHECK(samples[5].code == "tail,comma");
  CHECK(samples[9].label == 1);
}

TEST_CASE("csv header and label validation") {
  testutil::TempDir dir;
  const auto path = dir.file("bad.csv");
  SUBCASE("wrong header") {
    testutil::write_file(path, "code,id,label\nx,a,0\n");
    CHECK_THROWS_AS(corpus::load_corpus(path, corpus::Format::csv), ParseError);
  }
  SUBCASE("unlabeled header accepted") {
    testutil::write_file(path, "id,code\na,x\nb,y\n");
    const auto samples = corpus::load_corpus(path, corpus::Format::csv);
    REQUIRE(samples.size() == 2);
    CHECK_FALSE(samples[0].label.has_value());
  }
  SUBCASE("bad label value") {
    testutil::write_file(path, "id,code,label\na,x,7\n");
    CHECK_THROWS_AS(corpus::load_corpus(path, corpus::Format::csv), ParseError);
  }
}

TEST_CASE("save_jsonl then load is the identity on id/code/label") {
  testutil::TempDir dir;
  auto samples = labeled_samples(3, 4);
  samples[0].noise_flag = true;  // must not leak into the file
  const auto path = dir.file("out.jsonl");
  corpus::save_jsonl(samples, path);
  CHECK(testutil::read_file(path).find("noise_flag") == std::string::npos);
  const auto loaded = corpus::load_corpus(path, corpus::Format::jsonl);
  REQUIRE(loaded.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(loaded[i].id == samples[i].id);
    CHECK(loaded[i].code == samples[i].code);
    CHECK(loaded[i].label == samples[i].label);
    CHECK_FALSE(loaded[i].noise_flag);
  }
}

TEST_CASE("split_halves") {
  SUBCASE("10 samples split 5/5 disjoint") {
    const auto samples = labeled_samples(5, 5);
    const auto [s1, s2] = corpus::split_halves(samples, 7);
    CHECK(s1.size() == 5);
    CHECK(s2.size() == 5);
    auto all = id_set(s1);
    for (const auto& id : id_set(s2)) CHECK(all.insert(id).second);
    CHECK(all.size() == 10);
  }
  SUBCASE("odd sizes differ by one") {
    const auto samples = labeled_samples(6, 5);
    const auto [s1, s2] = corpus::split_halves(samples, 3);
    CHECK(s1.size() + s2.size() == 11);
    CHECK(std::max(s1.size(), s2.size()) - std::min(s1.size(), s2.size()) == 1);
  }
  SUBCASE("deterministic per seed") {
    const auto samples = labeled_samples(8, 8);
    const auto [a1, a2] = corpus::split_halves(samples, 42);
    const auto [b1, b2] = corpus::split_halves(samples, 42);
    CHECK(id_set(a1) == id_set(b1));
    CHECK(id_set(a2) == id_set(b2));
  }
  SUBCASE("too few samples") {
    const std::vector<Sample> one = {{"a", "x", 1, false}};
    CHECK_THROWS_AS(corpus::split_halves(one, 1), ValidationError);
  }
}

TEST_CASE("split_train_valid_test is a stratified partition") {
  const auto samples = labeled_samples(20, 80);
  corpus::SplitSpec spec;
  spec.rng_seed = 5;
  const auto bundle = corpus::split_train_valid_test(samples, spec, "mem");

  CHECK(bundle.train.size() + bundle.valid.size() + bundle.test.size() == 100);
  auto all = id_set(bundle.train);
  for (const auto& id : id_set(bundle.valid)) CHECK(all.insert(id).second);
  for (const auto& id : id_set(bundle.test)) CHECK(all.insert(id).second);
  CHECK(all.size() == 100);

  auto count_pos = [](const std::vector<Sample>& part) {
    return std::count_if(part.begin(), part.end(),
                         [](const Sample& s) { return *s.label == 1; });
  };
  // 20% positive everywhere thanks to stratification
  CHECK(count_pos(bundle.train) == 16);
  CHECK(count_pos(bundle.valid) == 2);
  CHECK(count_pos(bundle.test) == 2);
  CHECK(bundle.provenance.source == "mem");
  CHECK(bundle.provenance.split_seed == 5);

  SUBCASE("single-class input rejected") {
    const auto only_pos = labeled_samples(30, 0);
    CHECK_THROWS_AS(corpus::split_train_valid_test(only_pos, spec),
                    ValidationError);
  }
  SUBCASE("fractions must sum to one") {
    corpus::SplitSpec bad;
    bad.train_frac = 0.5;
    bad.valid_frac = 0.2;
    bad.test_frac = 0.2;
    CHECK_THROWS_AS(corpus::split_train_valid_test(samples, bad), ConfigError);
  }
}

TEST_CASE("balance_training") {
  SUBCASE("5 positives, 20 negatives -> 10 samples, 5 per class") {
    const auto balanced = corpus::balance_training(labeled_samples(5, 20), 1);
    CHECK(balanced.size() == 10);
    CHECK(std::count_if(balanced.begin(), balanced.end(),
                        [](const Sample& s) { return *s.label == 1; }) == 5);
  }
  SUBCASE("already balanced input is the identity") {
    const auto input = labeled_samples(5, 5);
    const auto balanced = corpus::balance_training(input, 1);
    CHECK(id_set(balanced) == id_set(input));
  }
  SUBCASE("fewer negatives than positives errors") {
    CHECK_THROWS_AS(corpus::balance_training(labeled_samples(5, 3), 1),
                    ValidationError);
  }
  SUBCASE("deterministic per seed") {
    const auto input = labeled_samples(5, 30);
    CHECK(id_set(corpus::balance_training(input, 9)) ==
          id_set(corpus::balance_training(input, 9)));
  }
}

TEST_CASE("inject_label_noise") {
  const auto samples = labeled_samples(50, 50);
  SUBCASE("flips exactly round(frac * n)") {
    const auto noisy = corpus::inject_label_noise(samples, 0.1, 3);
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      if (noisy[i].noise_flag) {
        ++flipped;
        CHECK(*noisy[i].label == 1 - *samples[i].label);
      } else {
        CHECK(noisy[i].label == samples[i].label);
      }
    }
    CHECK(flipped == 10);
  }
  SUBCASE("zero fraction is the identity") {
    const auto noisy = corpus::inject_label_noise(samples, 0.0, 3);
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      CHECK(noisy[i].label == samples[i].label);
      CHECK_FALSE(noisy[i].noise_flag);
    }
  }
  SUBCASE("same seed twice restores the original labels") {
    const auto once = corpus::inject_label_noise(samples, 0.2, 3);
    const auto twice = corpus::inject_label_noise(once, 0.2, 3);
    for (std::size_t i = 0; i < twice.size(); ++i) {
      CHECK(twice[i].label == samples[i].label);
      CHECK_FALSE(twice[i].noise_flag);
    }
  }
  SUBCASE("invalid fraction") {
    CHECK_THROWS_AS(corpus::inject_label_noise(samples, 1.0, 3), ConfigError);
  }
}

TEST_CASE("corpus operations are pure partitions across seeds") {
  const auto samples = labeled_samples(37, 63);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto [s1, s2] = corpus::split_halves(samples, seed);
    auto ids = id_set(s1);
    for (const auto& id : id_set(s2)) CHECK(ids.insert(id).second);
    CHECK(ids.size() == samples.size());

    corpus::SplitSpec spec;
    spec.rng_seed = seed;
    const auto bundle = corpus::split_train_valid_test(samples, spec);
    auto bundle_ids = id_set(bundle.train);
    for (const auto& id : id_set(bundle.valid)) CHECK(bundle_ids.insert(id).second);
    for (const auto& id : id_set(bundle.test)) CHECK(bundle_ids.insert(id).second);
    CHECK(bundle_ids.size() == samples.size());
  }
}

TEST_CASE("synthetic corpus shape and determinism") {
  corpus::SyntheticSpec spec;
  const auto a = corpus::generate_synthetic_corpus(50, spec, 11);
  const auto b = corpus::generate_synthetic_corpus(50, spec, 11);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].code == b[i].code);
    CHECK(a[i].label == b[i].label);
  }
  std::size_t positives = 0;
  for (const auto& s : a) positives += *s.label;
  CHECK(positives == 50);
  // class signal vocabularies stay disjoint
  for (const auto& s : a) {
    const auto& wrong = *s.label == 1 ? "neg_sig" : "pos_sig";
    CHECK(s.code.find(wrong) == std::string::npos);
  }
  const auto c = corpus::generate_synthetic_corpus(50, spec, 12);
  CHECK(c[0].code != a[0].code);
}

TEST_CASE("synthetic decoys are marked, balanced and label-decoupled") {
  corpus::SyntheticSpec spec;
  spec.decoy_fraction = 0.2;
  const auto samples = corpus::generate_synthetic_corpus(400, spec, 9);
  REQUIRE(samples.size() == 800);

  std::size_t positives = 0, decoys = 0, matched = 0, mismatched = 0;
  for (const auto& s : samples) {
    positives += *s.label;
    const bool has_marker = s.code.find("odd_sig") != std::string::npos;
    const bool has_pos = s.code.find("pos_sig") != std::string::npos;
    const bool has_neg = s.code.find("neg_sig") != std::string::npos;
    if (has_marker) {
      ++decoys;
      // decoy signal comes from one coin-flip class
      CHECK_FALSE(has_pos == has_neg);
      if (has_pos == (*s.label == 1)) {
        ++matched;
      } else {
        ++mismatched;
      }
    } else if (has_pos || has_neg) {
      // regular samples stay on their own vocabulary
      CHECK(has_pos == (*s.label == 1));
    }
  }
  // labels stay exactly balanced regardless of decoys
  CHECK(positives == 400);
  CHECK(decoys > 800 * 0.2 / 2);
  CHECK(decoys < 800 * 0.2 * 2);
  // the feature-class coin splits decoys into both halves
  CHECK(matched > 0);
  CHECK(mismatched > 0);

  // the default spec produces no decoys
  const auto plain =
      corpus::generate_synthetic_corpus(50, corpus::SyntheticSpec{}, 9);
  for (const auto& s : plain) {
    CHECK(s.code.find("odd_sig") == std::string::npos);
  }
}
