#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "seedmap/corpus.hpp"
#include "seedmap/error.hpp"
#include "seedmap/learner.hpp"
#include "seedmap/rng.hpp"

using namespace seedmap;
using corpus::Sample;
using learner::LearnerConfig;

namespace {

std::vector<Sample> tiny_separable() {
  return {{"pos", "dangerous overflow memcpy", 1, false},
          {"neg", "harmless getter return", 0, false}};
}

std::vector<Sample> synthetic_train(std::size_t n_per_class, std::uint64_t seed) {
  corpus::SyntheticSpec spec;
  return corpus::generate_synthetic_corpus(n_per_class, spec, seed);
}

}  // namespace

TEST_CASE("train_with_dynamics learns a separable pair") {
  const auto train = tiny_separable();
  const auto state = features::fit_featurizer(train, 2048);
  LearnerConfig config;
  config.epochs = 10;
  const auto outcome = learner::train_with_dynamics(train, config, state);

  // final-epoch p_true above the argmax threshold for both samples
  for (const auto& record : outcome.dynamics.records) {
    if (record.epoch == 10) {
      CHECK(record.p_true > 0.5);
      CHECK(record.correct);
    }
  }
  for (const double w : outcome.model.weights) CHECK(std::isfinite(w));
}

TEST_CASE("dynamics log has exactly E * n entries, each pair once") {
  const auto train = synthetic_train(10, 4);  // 20 samples
  const auto state = features::fit_featurizer(train, 4096);

  SUBCASE("E = 1") {
    LearnerConfig config;
    config.epochs = 1;
    const auto outcome = learner::train_with_dynamics(train, config, state);
    CHECK(outcome.dynamics.records.size() == train.size());
    CHECK(outcome.dynamics.epoch_losses.size() == 1);
  }
  SUBCASE("E = 7") {
    LearnerConfig config;
    config.epochs = 7;
    const auto outcome = learner::train_with_dynamics(train, config, state);
    CHECK(outcome.dynamics.records.size() == 7 * train.size());
    std::set<std::pair<std::string, int>> seen;
    for (const auto& record : outcome.dynamics.records) {
      CHECK(record.p_true >= 0.0);
      CHECK(record.p_true <= 1.0);
      CHECK(record.correct == (record.p_true > 0.5));
      CHECK(seen.emplace(record.sample_id, record.epoch).second);
    }
    CHECK(seen.size() == 7 * train.size());
  }
}

TEST_CASE("training is bit-for-bit deterministic") {
  const auto train = synthetic_train(20, 9);
  const auto state = features::fit_featurizer(train, 4096);
  LearnerConfig config;
  config.rng_seed = 77;
  const auto a = learner::train_with_dynamics(train, config, state);
  const auto b = learner::train_with_dynamics(train, config, state);
  CHECK(a.model.bias == b.model.bias);
  CHECK(a.model.weights == b.model.weights);
  REQUIRE(a.dynamics.records.size() == b.dynamics.records.size());
  for (std::size_t i = 0; i < a.dynamics.records.size(); ++i) {
    CHECK(a.dynamics.records[i].p_true == b.dynamics.records[i].p_true);
  }
}

TEST_CASE("single-class training set is rejected") {
  const std::vector<Sample> one_class = {{"a", "x", 1, false},
                                         {"b", "y", 1, false}};
  const auto state = features::fit_featurizer(one_class, 256);
  CHECK_THROWS_AS(learner::train_with_dynamics(one_class, {}, state),
                  ValidationError);
}

TEST_CASE("predict_proba") {
  const auto train = tiny_separable();
  const auto state = features::fit_featurizer(train, 2048);

  SUBCASE("zero-weight model says 0.5 everywhere") {
    learner::TrainedModel model;
    model.weights.assign(2048, 0.0);
    model.bias = 0.0;
    const auto probas = learner::predict_proba(model, train, state);
    for (const auto& p : probas) {
      CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("probabilities sum to 1 and stay inside (0,1)") {
    LearnerConfig config;
    const auto outcome = learner::train_with_dynamics(train, config, state);
    const auto probas = learner::predict_proba(outcome.model, train, state);
    for (const auto& p : probas) {
      CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p[0] > 0.0);
      CHECK(p[1] > 0.0);
      CHECK(p[0] < 1.0);
      CHECK(p[1] < 1.0);
    }
  }
  SUBCASE("raising the weight of a present token raises p(class=1)") {
    learner::TrainedModel model;
    model.weights.assign(2048, 0.0);
    const auto vec = features::vectorize(state, train[0].code);
    const auto bucket = vec.entries().front().first;
    const double before = learner::predict_proba_one(model, vec)[1];
    model.weights[bucket] += 0.1;
    const double after = learner::predict_proba_one(model, vec)[1];
    CHECK(after > before);
  }
}

TEST_CASE("logistic gradient matches central finite differences") {
  const auto train = synthetic_train(6, 21);  // 12 samples
  const auto state = features::fit_featurizer(train, 64);  // small dense dim
  std::vector<features::FeatureVector> x;
  std::vector<int> y;
  for (const auto& s : train) {
    x.push_back(features::vectorize(state, s.code));
    y.push_back(*s.label);
  }
  Rng rng(5);
  std::vector<double> weights(64);
  for (auto& w : weights) w = rng.next_double() - 0.5;
  const double bias = 0.25;
  const double l2 = 1e-3;

  std::vector<double> grad(64);
  double grad_bias = 0.0;
  learner::logistic_gradient(x, y, weights, bias, l2, grad, grad_bias);

  const double h = 1e-6;
  for (std::size_t b = 0; b < 8; ++b) {  // a spot-check of coordinates
    auto plus = weights, minus = weights;
    plus[b] += h;
    minus[b] -= h;
    const double numeric = (learner::logistic_loss(x, y, plus, bias, l2) -
                            learner::logistic_loss(x, y, minus, bias, l2)) /
                           (2 * h);
    if (std::fabs(numeric) > 1e-8) {
      CHECK(grad[b] == doctest::Approx(numeric).epsilon(1e-5));
    } else {
      CHECK(std::fabs(grad[b] - numeric) < 1e-8);
    }
  }
  const double numeric_bias =
      (learner::logistic_loss(x, y, weights, bias + h, l2) -
       learner::logistic_loss(x, y, weights, bias - h, l2)) /
      (2 * h);
  CHECK(grad_bias == doctest::Approx(numeric_bias).epsilon(1e-5));
}

TEST_CASE("training loss is non-increasing at a small learning rate") {
  const auto train = synthetic_train(50, 2);
  const auto state = features::fit_featurizer(train, 8192);
  LearnerConfig config;
  config.learning_rate = 0.01;
  config.epochs = 10;
  const auto outcome = learner::train_with_dynamics(train, config, state);
  REQUIRE(outcome.dynamics.epoch_losses.size() == 10);
  for (std::size_t e = 1; e < 10; ++e) {
    CHECK(outcome.dynamics.epoch_losses[e] <=
          outcome.dynamics.epoch_losses[e - 1] + 1e-12);
  }
}

TEST_CASE("evaluate delegates to the metrics") {
  const auto train = synthetic_train(40, 3);
  const auto state = features::fit_featurizer(train, 8192);
  LearnerConfig config;
  const auto outcome = learner::train_with_dynamics(train, config, state);
  const auto [f1, acc] = learner::evaluate(outcome.model, train, state);
  CHECK(f1 > 0.9);  // training-set fit on clean separable-ish data
  CHECK(acc > 0.9);
  CHECK(f1 <= 1.0);
  CHECK(acc <= 1.0);
}

TEST_CASE("classifier contract wraps the built-in learner") {
  const auto train = synthetic_train(20, 8);
  const auto state = features::fit_featurizer(train, 4096);
  const learner::LogisticClassifier classifier(state);
  learner::DynamicsLog dynamics;
  LearnerConfig config;
  const auto model = classifier.fit(train, config, &dynamics);
  CHECK(dynamics.records.size() == 10 * train.size());
  const auto probas = classifier.predict(*model, train);
  CHECK(probas.size() == train.size());
  const auto [f1, acc] = learner::evaluate_classifier(classifier, *model, train);
  CHECK(f1 > 0.5);
  CHECK(acc > 0.5);

  // the direct path and the contract path agree exactly
  const auto direct = learner::train_with_dynamics(train, config, state);
  const auto& unwrapped = learner::LogisticClassifier::unwrap(*model);
  CHECK(unwrapped.weights == direct.model.weights);
  CHECK(unwrapped.bias == direct.model.bias);
}
