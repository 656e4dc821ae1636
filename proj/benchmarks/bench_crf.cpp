// Inference and gradient microbenchmarks on synthetic lattices.
#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "textanon/crf.hpp"
#include "textanon/rng.hpp"

namespace {

using namespace textanon;

TagSchema make_schema(std::size_t labels) {
  std::vector<std::string> tags{"O"};
  for (std::size_t i = 1; i < labels; ++i) {
    std::string cat = "c" + std::to_string(100 + i);
    tags.push_back("B-" + cat);
  }
  return TagSchema(tags);
}

CrfModel make_model(std::size_t features, std::size_t labels,
                    std::uint64_t seed) {
  std::vector<std::string> names;
  names.reserve(features);
  for (std::size_t i = 0; i < features; ++i) {
    names.push_back("f" + std::to_string(100000 + i));
  }
  FeatureTemplateConfig config;
  CrfModel model = CrfModel::zeros(
      FeatureIndex(names, make_schema(labels), config.fingerprint()), config);
  std::mt19937_64 gen(seed);
  for (double& w : model.unary_weights) w = draw_unit(gen) * 2.0 - 1.0;
  for (double& w : model.transition_weights) w = draw_unit(gen) * 2.0 - 1.0;
  return model;
}

EncodedSentence make_sentence(const CrfModel& model, std::size_t length,
                              std::size_t active_per_position,
                              std::uint64_t seed, bool with_gold) {
  std::mt19937_64 gen(seed);
  EncodedSentence enc;
  enc.length = length;
  enc.active.resize(length);
  for (auto& ids : enc.active) {
    for (std::size_t k = 0; k < active_per_position; ++k) {
      ids.push_back(static_cast<std::uint32_t>(
          draw_below(gen, model.feature_count())));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  if (with_gold) {
    std::vector<std::uint32_t> gold(length);
    for (auto& y : gold) {
      y = static_cast<std::uint32_t>(draw_below(gen, model.label_count()));
    }
    enc.gold = gold;
  }
  return enc;
}

void BM_LogPartition(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto L = static_cast<std::size_t>(state.range(1));
  CrfModel model = make_model(5000, L, 7);
  EncodedSentence enc = make_sentence(model, T, 20, 11, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_partition(model, enc));
  }
}
BENCHMARK(BM_LogPartition)->Args({16, 14})->Args({50, 14})->Args({16, 30});

void BM_Posteriors(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto L = static_cast<std::size_t>(state.range(1));
  CrfModel model = make_model(5000, L, 7);
  EncodedSentence enc = make_sentence(model, T, 20, 11, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(posteriors(model, enc));
  }
}
BENCHMARK(BM_Posteriors)->Args({16, 14})->Args({50, 14});

void BM_Viterbi(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto L = static_cast<std::size_t>(state.range(1));
  CrfModel model = make_model(5000, L, 7);
  EncodedSentence enc = make_sentence(model, T, 20, 11, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(viterbi(model, enc));
  }
}
BENCHMARK(BM_Viterbi)->Args({16, 14})->Args({50, 14});

void BM_BatchGradient(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  CrfModel model = make_model(5000, 14, 7);
  std::vector<EncodedSentence> sentences;
  for (std::size_t i = 0; i < batch; ++i) {
    sentences.push_back(make_sentence(model, 16, 20, 100 + i, true));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(nll_and_gradient(model, sentences, 1e-4));
  }
}
BENCHMARK(BM_BatchGradient)->Arg(1)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
