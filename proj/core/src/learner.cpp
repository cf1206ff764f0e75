#include "seedmap/learner.hpp"

#include <algorithm>
#include <cmath>

#include "seedmap/error.hpp"
#include "seedmap/metrics.hpp"
#include "seedmap/rng.hpp"

namespace seedmap::learner {
namespace {

constexpr double kProbFloor = 1e-15;

double sigmoid(double score) {
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

double clamp_prob(double p) {
  return std::min(std::max(p, kProbFloor), 1.0 - kProbFloor);
}

double raw_score(std::span<const double> weights, double bias,
                 const features::FeatureVector& vec) {
  double score = bias;
  for (const auto& [bucket, value] : vec.entries()) {
    score += weights[bucket] * value;
  }
  return score;
}

void check_training_set(std::span<const corpus::Sample> train) {
  if (train.empty()) {
    throw ValidationError("train_with_dynamics: training set is empty");
  }
  bool has[2] = {false, false};
  for (const auto& sample : train) {
    if (!sample.label.has_value()) {
      throw ValidationError("train_with_dynamics: sample \"" + sample.id +
                            "\" has no label");
    }
    has[*sample.label] = true;
  }
  if (!has[0] || !has[1]) {
    throw ValidationError(
        "train_with_dynamics: training set contains a single class");
  }
}

}  // namespace

void LearnerConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (l2_penalty < 0.0) throw ConfigError("l2_penalty must be >= 0");
}

bool operator==(const LearnerConfig& a, const LearnerConfig& b) {
  return a.epochs == b.epochs && a.learning_rate == b.learning_rate &&
         a.batch_size == b.batch_size && a.l2_penalty == b.l2_penalty &&
         a.rng_seed == b.rng_seed;
}

TrainOutcome train_with_dynamics(std::span<const corpus::Sample> train,
                                 const LearnerConfig& config,
                                 const features::FeaturizerState& featurizer) {
  config.validate();
  check_training_set(train);

  const std::size_t n = train.size();
  const std::size_t dim = featurizer.dimension;
  std::vector<features::FeatureVector> x;
  x.reserve(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(features::vectorize(featurizer, train[i].code));
    y[i] = *train[i].label;
  }

  std::vector<double> weights(dim, 0.0);
  double bias = 0.0;
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  const double decay = 1.0 - config.learning_rate * config.l2_penalty;

  Rng rng(config.rng_seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  DynamicsLog log;
  log.epochs = config.epochs;
  log.records.reserve(static_cast<std::size_t>(config.epochs) * n);
  log.epoch_losses.reserve(static_cast<std::size_t>(config.epochs));

  std::vector<double> grad(dim, 0.0);
  std::vector<std::uint32_t> touched;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t end = std::min(start + batch_size, n);
      double grad_bias = 0.0;
      touched.clear();
      // classic SGD steps: per-sample gradients summed over the batch
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const double p = sigmoid(raw_score(weights, bias, x[i]));
        const double coef = p - static_cast<double>(y[i]);
        for (const auto& [bucket, value] : x[i].entries()) {
          if (grad[bucket] == 0.0) touched.push_back(bucket);
          grad[bucket] += coef * value;
        }
        grad_bias += coef;
      }
      if (config.l2_penalty > 0.0) {
        for (double& w : weights) w *= decay;
      }
      for (const auto bucket : touched) {
        weights[bucket] -= config.learning_rate * grad[bucket];
        grad[bucket] = 0.0;
      }
      bias -= config.learning_rate * grad_bias;
    }

    // post-epoch evaluation over the full training set, original order
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p1 = sigmoid(raw_score(weights, bias, x[i]));
      const double p_true = y[i] == 1 ? p1 : 1.0 - p1;
      log.records.push_back(
          EpochProbability{train[i].id, epoch, p_true, p_true > 0.5});
      loss -= std::log(clamp_prob(p_true));
    }
    loss /= static_cast<double>(n);
    double weight_norm_sq = 0.0;
    for (const double w : weights) weight_norm_sq += w * w;
    loss += 0.5 * config.l2_penalty * weight_norm_sq;
    log.epoch_losses.push_back(loss);
  }

  TrainOutcome outcome;
  outcome.model = TrainedModel{std::move(weights), bias, config};
  outcome.dynamics = std::move(log);
  return outcome;
}

std::array<double, 2> predict_proba_one(const TrainedModel& model,
                                        const features::FeatureVector& vec) {
  const double p1 =
      clamp_prob(sigmoid(raw_score(model.weights, model.bias, vec)));
  return {1.0 - p1, p1};
}

std::vector<std::array<double, 2>> predict_proba(
    const TrainedModel& model, std::span<const corpus::Sample> samples,
    const features::FeaturizerState& featurizer) {
  std::vector<std::array<double, 2>> out;
  out.reserve(samples.size());
  for (const auto& sample : samples) {
    out.push_back(
        predict_proba_one(model, features::vectorize(featurizer, sample.code)));
  }
  return out;
}

std::pair<double, double> evaluate(const TrainedModel& model,
                                   std::span<const corpus::Sample> test,
                                   const features::FeaturizerState& featurizer) {
  if (test.empty()) throw ValidationError("evaluate: test set is empty");
  std::vector<int> truth(test.size());
  std::vector<int> predicted(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!test[i].label.has_value()) {
      throw ValidationError("evaluate: sample \"" + test[i].id +
                            "\" has no label");
    }
    truth[i] = *test[i].label;
    const auto proba =
        predict_proba_one(model, features::vectorize(featurizer, test[i].code));
    predicted[i] = proba[1] > 0.5 ? 1 : 0;
  }
  return {metrics::macro_f1(truth, predicted), metrics::accuracy(truth, predicted)};
}

double logistic_loss(std::span<const features::FeatureVector> x,
                     std::span<const int> y, std::span<const double> weights,
                     double bias, double l2_penalty) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p1 = sigmoid(raw_score(weights, bias, x[i]));
    const double p_true = y[i] == 1 ? p1 : 1.0 - p1;
    loss -= std::log(clamp_prob(p_true));
  }
  loss /= static_cast<double>(x.size());
  double weight_norm_sq = 0.0;
  for (const double w : weights) weight_norm_sq += w * w;
  return loss + 0.5 * l2_penalty * weight_norm_sq;
}

void logistic_gradient(std::span<const features::FeatureVector> x,
                       std::span<const int> y, std::span<const double> weights,
                       double bias, double l2_penalty,
                       std::span<double> grad_weights, double& grad_bias) {
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = sigmoid(raw_score(weights, bias, x[i]));
    const double coef = (p - static_cast<double>(y[i])) * inv_n;
    for (const auto& [bucket, value] : x[i].entries()) {
      grad_weights[bucket] += coef * value;
    }
    grad_bias += coef;
  }
  for (std::size_t b = 0; b < weights.size(); ++b) {
    grad_weights[b] += l2_penalty * weights[b];
  }
}

namespace {

class LogisticModel final : public Classifier::Model {
 public:
  explicit LogisticModel(TrainedModel model) : model_(std::move(model)) {}
  const TrainedModel& get() const { return model_; }

 private:
  TrainedModel model_;
};

}  // namespace

std::pair<double, double> evaluate_classifier(
    const Classifier& classifier, const Classifier::Model& model,
    std::span<const corpus::Sample> test) {
  if (test.empty()) throw ValidationError("evaluate: test set is empty");
  const auto probas = classifier.predict(model, test);
  std::vector<int> truth(test.size());
  std::vector<int> predicted(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!test[i].label.has_value()) {
      throw ValidationError("evaluate: sample \"" + test[i].id +
                            "\" has no label");
    }
    truth[i] = *test[i].label;
    predicted[i] = probas[i][1] > 0.5 ? 1 : 0;
  }
  return {metrics::macro_f1(truth, predicted), metrics::accuracy(truth, predicted)};
}

std::unique_ptr<Classifier::Model> LogisticClassifier::fit(
    std::span<const corpus::Sample> train, const LearnerConfig& config,
    DynamicsLog* dynamics) const {
  TrainOutcome outcome = train_with_dynamics(train, config, *featurizer_);
  if (dynamics != nullptr) *dynamics = std::move(outcome.dynamics);
  return std::make_unique<LogisticModel>(std::move(outcome.model));
}

std::vector<std::array<double, 2>> LogisticClassifier::predict(
    const Model& model, std::span<const corpus::Sample> samples) const {
  return predict_proba(unwrap(model), samples, *featurizer_);
}

const TrainedModel& LogisticClassifier::unwrap(const Model& model) {
  const auto* logistic = dynamic_cast<const LogisticModel*>(&model);
  if (logistic == nullptr) {
    throw ValidationError("model was not produced by LogisticClassifier");
  }
  return logistic->get();
}

}  // namespace seedmap::learner
