#include <doctest.h>

#include <set>

#include "seedmap/error.hpp"
#include "seedmap/harness.hpp"
#include "seedmap/rng.hpp"
#include "test_util.hpp"

using namespace seedmap;
using harness::ALConfig;
using harness::Arm;

namespace {

struct Fixture {
  corpus::CorpusBundle bundle;
  std::vector<corpus::Sample> bad_seeds;
  features::FeaturizerState state;
};

// small but realistic: pool of ~230, noisy labels, a few bad seeds
Fixture make_fixture(std::uint64_t seed) {
  Fixture fx;
  corpus::SyntheticSpec spec;
  auto samples = corpus::generate_synthetic_corpus(145, spec, seed);
  corpus::SplitSpec split;
  split.rng_seed = seed;
  fx.bundle = corpus::split_train_valid_test(samples, split, "fixture");
  fx.bundle.train = corpus::inject_label_noise(fx.bundle.train, 0.1, seed + 1);
  fx.state = features::fit_featurizer(fx.bundle.train, 8192);
  for (std::size_t i = 0; i < fx.bundle.train.size(); i += 40) {
    fx.bad_seeds.push_back(fx.bundle.train[i]);
  }
  return fx;
}

ALConfig small_config(Arm arm) {
  ALConfig config;
  config.initial_seed_size = 40;
  config.budget_per_iter = 12;
  config.iterations = 4;
  config.arm = arm;
  config.strategy = arm == Arm::random ? acquisition::Strategy::random
                                       : acquisition::Strategy::deepgini;
  config.filter.budget = 12;
  config.filter.drop_frac = 0.25;  // 16 candidates, 4 dropped
  config.learner.epochs = 4;
  config.rng_seed = 99;
  config.random_repeats = 3;
  return config;
}

}  // namespace

TEST_CASE("standard arm bookkeeping") {
  const auto fx = make_fixture(1);
  const auto config = small_config(Arm::standard);
  const auto report =
      harness::run_active_learning(fx.bundle, {}, fx.state, config);

  REQUIRE(report.iterations.size() == 5);  // iteration 0 plus 4 budgeted
  CHECK(report.iterations[0].iteration == 0);
  CHECK(report.iterations[0].labeled_count == 40);
  CHECK(report.iterations[0].selected_ids.size() == 40);
  for (int t = 1; t <= 4; ++t) {
    const auto& record = report.iterations[static_cast<std::size_t>(t)];
    CHECK(record.iteration == t);
    CHECK(record.labeled_count == 40 + 12 * static_cast<std::size_t>(t));
    CHECK(record.selected_ids.size() == 12);
    CHECK(record.dropped_ids.empty());
  }
  CHECK_FALSE(report.truncated);

  // no id is ever selected twice across iterations
  std::set<std::string> seen;
  for (const auto& record : report.iterations) {
    for (const auto& id : record.selected_ids) CHECK(seen.insert(id).second);
  }
  CHECK(seen.size() == 40 + 4 * 12);
}

TEST_CASE("proposed arm over-selects and filters") {
  const auto fx = make_fixture(2);
  const auto config = small_config(Arm::proposed);
  const auto report =
      harness::run_active_learning(fx.bundle, fx.bad_seeds, fx.state, config);

  REQUIRE(report.iterations.size() == 5);
  for (int t = 1; t <= 4; ++t) {
    const auto& record = report.iterations[static_cast<std::size_t>(t)];
    CHECK(record.selected_ids.size() == 12);
    CHECK(record.dropped_ids.size() == 4);
    // dropped candidates stay in the pool and may be re-considered, but the
    // kept ones never reappear
    std::set<std::string> kept(record.selected_ids.begin(),
                               record.selected_ids.end());
    for (const auto& id : record.dropped_ids) CHECK_FALSE(kept.contains(id));
  }
  CHECK(report.iterations.back().labeled_count == 40 + 48);
}

TEST_CASE("random arm carries sub-run series plus the mean series") {
  const auto fx = make_fixture(3);
  const auto config = small_config(Arm::random);
  const auto report =
      harness::run_active_learning(fx.bundle, {}, fx.state, config);

  REQUIRE(report.sub_runs.size() == 3);
  REQUIRE(report.iterations.size() == 5);
  for (const auto& sub : report.sub_runs) {
    REQUIRE(sub.iterations.size() == 5);
    for (std::size_t t = 0; t < 5; ++t) {
      CHECK(sub.iterations[t].labeled_count ==
            report.iterations[t].labeled_count);
    }
  }
  for (std::size_t t = 1; t < 5; ++t) {
    double f1_sum = 0.0;
    for (const auto& sub : report.sub_runs) f1_sum += sub.iterations[t].macro_f1;
    CHECK(report.iterations[t].macro_f1 ==
          doctest::Approx(f1_sum / 3.0).epsilon(1e-12));
    CHECK(report.iterations[t].selected_ids.empty());
  }
  // sub-runs use distinct selection streams
  CHECK(report.sub_runs[0].selection_seed != report.sub_runs[1].selection_seed);
}

TEST_CASE("initial seed set is identical across arms with one seed") {
  const auto fx = make_fixture(4);
  const auto standard = harness::run_active_learning(
      fx.bundle, {}, fx.state, small_config(Arm::standard));
  const auto proposed = harness::run_active_learning(
      fx.bundle, fx.bad_seeds, fx.state, small_config(Arm::proposed));
  const auto random = harness::run_active_learning(
      fx.bundle, {}, fx.state, small_config(Arm::random));
  CHECK(standard.iterations[0].selected_ids == proposed.iterations[0].selected_ids);
  CHECK(standard.iterations[0].selected_ids == random.iterations[0].selected_ids);
  CHECK(standard.iterations[0].macro_f1 == proposed.iterations[0].macro_f1);
}

TEST_CASE("runs are deterministic") {
  const auto fx = make_fixture(5);
  const auto config = small_config(Arm::proposed);
  const auto a =
      harness::run_active_learning(fx.bundle, fx.bad_seeds, fx.state, config);
  const auto b =
      harness::run_active_learning(fx.bundle, fx.bad_seeds, fx.state, config);
  CHECK(a == b);
  CHECK(harness::report_to_json(a) == harness::report_to_json(b));
}

TEST_CASE("pool exhaustion truncates the run") {
  const auto fx = make_fixture(6);
  auto config = small_config(Arm::standard);
  config.initial_seed_size = fx.bundle.train.size() - 10;
  config.budget_per_iter = 8;
  config.iterations = 5;
  const auto report =
      harness::run_active_learning(fx.bundle, {}, fx.state, config);
  CHECK(report.truncated);
  CHECK(report.iterations.size() < 6);
  // labeled counts stay strictly increasing even when the last batch is short
  for (std::size_t t = 1; t < report.iterations.size(); ++t) {
    CHECK(report.iterations[t].labeled_count >
          report.iterations[t - 1].labeled_count);
  }

  SUBCASE("seed set larger than the pool is a config error") {
    config.initial_seed_size = fx.bundle.train.size() + 1;
    CHECK_THROWS_AS(harness::run_active_learning(fx.bundle, {}, fx.state, config),
                    ConfigError);
  }
}

TEST_CASE("config validation") {
  auto config = small_config(Arm::random);
  config.strategy = acquisition::Strategy::deepgini;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  auto standard = small_config(Arm::standard);
  standard.strategy = acquisition::Strategy::random;
  CHECK_THROWS_AS(standard.validate(), ConfigError);

  auto zero_budget = small_config(Arm::standard);
  zero_budget.budget_per_iter = 0;
  CHECK_THROWS_AS(zero_budget.validate(), ConfigError);
}

TEST_CASE("report round-trip and version checking") {
  testutil::TempDir dir;
  const auto fx = make_fixture(7);
  const auto report = harness::run_active_learning(fx.bundle, fx.bad_seeds,
                                                   fx.state,
                                                   small_config(Arm::proposed));
  const auto path = dir.file("report.json");
  harness::save_report(report, path);
  const auto loaded = harness::load_report(path);
  CHECK(loaded == report);

  SUBCASE("saving twice is byte-identical") {
    const auto again = dir.file("again.json");
    harness::save_report(report, again);
    CHECK(testutil::read_file(path) == testutil::read_file(again));
  }
  SUBCASE("version mismatch names both versions") {
    auto text = testutil::read_file(path);
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("\"format_version\": 1").size(),
                 "\"format_version\": 2");
    const auto bad = dir.file("bad.json");
    testutil::write_file(bad, text);
    try {
      harness::load_report(bad);
      FAIL("expected VersionMismatchError");
    } catch (const VersionMismatchError& e) {
      const std::string message = e.what();
      CHECK(message.find("2") != std::string::npos);
      CHECK(message.find("1") != std::string::npos);
    }
  }
}

TEST_CASE("fraction sweep") {
  corpus::SyntheticSpec spec;
  auto samples = corpus::generate_synthetic_corpus(80, spec, 12);
  corpus::SplitSpec split;
  split.rng_seed = 12;
  const auto bundle = corpus::split_train_valid_test(samples, split);
  learner::LearnerConfig config;
  config.epochs = 4;
  config.rng_seed = 5;

  const auto rows = harness::run_fraction_sweep(bundle, config, /*jobs=*/2, 8192);
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(rows[i].fraction == doctest::Approx(0.1 * (i + 1)).epsilon(1e-12));
    if (i > 0) CHECK(rows[i].train_size >= rows[i - 1].train_size);
  }
  CHECK(rows.back().train_size == bundle.train.size());

  // the 100% row equals training on the full set directly
  const auto state = features::fit_featurizer(bundle.train, 8192);
  const auto outcome = learner::train_with_dynamics(bundle.train, config, state);
  const auto [f1, acc] = learner::evaluate(outcome.model, bundle.test, state);
  CHECK(rows.back().macro_f1 == f1);
  CHECK(rows.back().accuracy == acc);

  // max markers flag exactly the argmax rows
  double max_f1 = 0.0;
  for (const auto& row : rows) max_f1 = std::max(max_f1, row.macro_f1);
  for (const auto& row : rows) CHECK(row.is_max_f1 == (row.macro_f1 == max_f1));

  // determinism across job counts
  const auto rows_seq = harness::run_fraction_sweep(bundle, config, 1, 8192);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(rows_seq[i].macro_f1 == rows[i].macro_f1);
  }
}

TEST_CASE("compare_reports pairs budgeted iterations") {
  const auto fx = make_fixture(8);
  const auto standard = harness::run_active_learning(fx.bundle, {}, fx.state,
                                                     small_config(Arm::standard));
  const auto proposed = harness::run_active_learning(
      fx.bundle, fx.bad_seeds, fx.state, small_config(Arm::proposed));
  const auto random = harness::run_active_learning(fx.bundle, {}, fx.state,
                                                   small_config(Arm::random));
  const auto rows = harness::compare_reports(random, standard, proposed);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].t_test.n_pairs == 4);
  CHECK(rows[0].t_test.degrees_of_freedom == 3);
}
