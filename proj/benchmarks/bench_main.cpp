#include <benchmark/benchmark.h>

#include "seedmap/acquisition.hpp"
#include "seedmap/cartography.hpp"
#include "seedmap/corpus.hpp"
#include "seedmap/features.hpp"
#include "seedmap/learner.hpp"
#include "seedmap/metrics.hpp"
#include "seedmap/rng.hpp"

namespace {

using namespace seedmap;

const std::vector<corpus::Sample>& bench_corpus() {
  static const auto samples = [] {
    corpus::SyntheticSpec spec;
    return corpus::generate_synthetic_corpus(500, spec, 1);
  }();
  return samples;
}

const features::FeaturizerState& bench_featurizer() {
  static const auto state = features::fit_featurizer(bench_corpus());
  return state;
}

void BM_Tokenize(benchmark::State& state) {
  const auto& code = bench_corpus()[0].code;
  for (auto _ : state) {
    benchmark::DoNotOptimize(features::tokenize(code));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(code.size()));
}
BENCHMARK(BM_Tokenize);

void BM_Vectorize(benchmark::State& state) {
  const auto& featurizer = bench_featurizer();
  const auto& code = bench_corpus()[0].code;
  for (auto _ : state) {
    benchmark::DoNotOptimize(features::vectorize(featurizer, code));
  }
}
BENCHMARK(BM_Vectorize);

void BM_TrainWithDynamics(benchmark::State& state) {
  const auto& featurizer = bench_featurizer();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<corpus::Sample> train(bench_corpus().begin(),
                                    bench_corpus().begin() + n);
  learner::LearnerConfig config;
  config.epochs = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        learner::train_with_dynamics(train, config, featurizer));
  }
}
BENCHMARK(BM_TrainWithDynamics)->Arg(128)->Arg(512)->Arg(1000);

void BM_BuildMap(benchmark::State& state) {
  const auto& featurizer = bench_featurizer();
  learner::LearnerConfig config;
  static const auto outcome =
      learner::train_with_dynamics(bench_corpus(), config, featurizer);
  cartography::BadSeedCriteria criteria;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cartography::build_map(outcome.dynamics, criteria, 10));
  }
}
BENCHMARK(BM_BuildMap);

void BM_SelectDeepGini(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> ids;
  std::vector<std::array<double, 2>> probas;
  Rng rng(5);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("s" + std::to_string(i));
    const double p = rng.next_double();
    probas.push_back({1.0 - p, p});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(acquisition::select_deepgini(ids, probas, n / 10));
  }
}
BENCHMARK(BM_SelectDeepGini)->Arg(1000)->Arg(10000);

void BM_SelectKMeans(benchmark::State& state) {
  const auto& featurizer = bench_featurizer();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> ids;
  std::vector<features::FeatureVector> vectors;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(bench_corpus()[i].id);
    vectors.push_back(features::vectorize(featurizer, bench_corpus()[i].code));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(acquisition::select_kmeans(ids, vectors, 25, 1));
  }
}
BENCHMARK(BM_SelectKMeans)->Arg(200)->Arg(500);

void BM_PairedTTest(benchmark::State& state) {
  Rng rng(11);
  std::vector<double> a(10), b(10);
  for (int i = 0; i < 10; ++i) {
    a[i] = rng.next_double();
    b[i] = rng.next_double();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::paired_t_test(a, b));
  }
}
BENCHMARK(BM_PairedTTest);

}  // namespace

BENCHMARK_MAIN();
