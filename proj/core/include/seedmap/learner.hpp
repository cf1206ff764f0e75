#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seedmap/corpus.hpp"
#include "seedmap/features.hpp"

namespace seedmap::learner {

struct LearnerConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  int batch_size = 32;
  double l2_penalty = 1e-4;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

bool operator==(const LearnerConfig& a, const LearnerConfig& b);

/// Probability the model assigned to a sample's ground-truth label after
/// one epoch of training, plus the argmax correctness flag (p_true > 0.5
/// for the binary built-in learner).
struct EpochProbability {
  std::string sample_id;
  int epoch = 0;  // 1-based
  double p_true = 0.0;
  bool correct = false;
};

struct DynamicsLog {
  int epochs = 0;
  // epoch-major, training-set order within each epoch; E * n entries
  std::vector<EpochProbability> records;
  // mean logistic loss plus the L2 term after each epoch
  std::vector<double> epoch_losses;
};

struct TrainedModel {
  std::vector<double> weights;  // featurizer dimension
  double bias = 0.0;
  LearnerConfig config;
};

struct TrainOutcome {
  TrainedModel model;
  DynamicsLog dynamics;
};

/// Mini-batch gradient descent on logistic loss with L2 penalty. After each
/// epoch's updates the model is evaluated on every training sample and the
/// true-label probability recorded. Deterministic: identical inputs and
/// seed give bit-identical weights and log.
TrainOutcome train_with_dynamics(std::span<const corpus::Sample> train,
                                 const LearnerConfig& config,
                                 const features::FeaturizerState& featurizer);

/// {p(class=0), p(class=1)}, both in (0, 1).
std::array<double, 2> predict_proba_one(const TrainedModel& model,
                                        const features::FeatureVector& vec);

std::vector<std::array<double, 2>> predict_proba(
    const TrainedModel& model, std::span<const corpus::Sample> samples,
    const features::FeaturizerState& featurizer);

/// {macro_f1, accuracy} with argmax predictions at threshold 0.5.
std::pair<double, double> evaluate(const TrainedModel& model,
                                   std::span<const corpus::Sample> test,
                                   const features::FeaturizerState& featurizer);

// Full-batch loss and gradient of the same objective the training loop
// minimizes; used by gradient checks.
double logistic_loss(std::span<const features::FeatureVector> x,
                     std::span<const int> y, std::span<const double> weights,
                     double bias, double l2_penalty);
void logistic_gradient(std::span<const features::FeatureVector> x,
                       std::span<const int> y, std::span<const double> weights,
                       double bias, double l2_penalty,
                       std::span<double> grad_weights, double& grad_bias);

/// Trainable-classifier contract. Any backend able to report per-epoch
/// true-label probabilities for its training set and class probabilities
/// for new samples can drive the cartography and active-learning loops.
class Classifier {
 public:
  class Model {
   public:
    virtual ~Model() = default;
  };

  virtual ~Classifier() = default;

  /// Trains from scratch. When dynamics is non-null it receives the full
  /// per-sample, per-epoch log.
  virtual std::unique_ptr<Model> fit(std::span<const corpus::Sample> train,
                                     const LearnerConfig& config,
                                     DynamicsLog* dynamics) const = 0;

  virtual std::vector<std::array<double, 2>> predict(
      const Model& model, std::span<const corpus::Sample> samples) const = 0;
};

/// {macro_f1, accuracy} for any classifier backend.
std::pair<double, double> evaluate_classifier(
    const Classifier& classifier, const Classifier::Model& model,
    std::span<const corpus::Sample> test);

/// Built-in backend: binary logistic regression over hashed TF-IDF
/// features. Holds a reference to the featurizer state; the caller keeps
/// the state alive for the classifier's lifetime.
class LogisticClassifier final : public Classifier {
 public:
  explicit LogisticClassifier(const features::FeaturizerState& featurizer)
      : featurizer_(&featurizer) {}

  std::unique_ptr<Model> fit(std::span<const corpus::Sample> train,
                             const LearnerConfig& config,
                             DynamicsLog* dynamics) const override;
  std::vector<std::array<double, 2>> predict(
      const Model& model, std::span<const corpus::Sample> samples) const override;

  /// Access to the concrete weights of a model produced by fit().
  static const TrainedModel& unwrap(const Model& model);

 private:
  const features::FeaturizerState* featurizer_;
};

}  // namespace seedmap::learner
