// End-to-end benchmarks: feature extraction, encoding, tagging, anonymizing.
#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "textanon/anonymizer.hpp"
#include "textanon/corpus.hpp"
#include "textanon/crf.hpp"
#include "textanon/features.hpp"

namespace {

using namespace textanon;

Corpus sample_corpus() {
  std::vector<std::string> words = {
      "Thousands", "of",  "demonstrators", "have", "marched", "through",
      "London",    "to",  "protest",       "the",  "war",     "in",
      "Iraq"};
  std::vector<std::string> poses = {"NNS", "IN", "NNS", "VBP", "VBN", "IN",
                                    "NNP", "TO", "VB",  "DT",  "NN",  "IN",
                                    "NNP"};
  std::vector<std::string> tags = {"O", "O", "O", "O", "O", "O", "B-geo",
                                   "O", "O", "O", "O", "O", "B-geo"};
  Corpus corpus;
  for (int s = 0; s < 64; ++s) {
    Sentence sentence;
    sentence.id = "Sentence " + std::to_string(s + 1);
    for (std::size_t t = 0; t < words.size(); ++t) {
      sentence.tokens.push_back(Token{words[t], poses[t], tags[t]});
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  corpus.schema = TagSchema({"O", "B-geo", "I-geo"});
  return corpus;
}

void BM_ExtractFeatures(benchmark::State& state) {
  Corpus corpus = sample_corpus();
  FeatureTemplateConfig config;
  for (auto _ : state) {
    for (std::size_t t = 0; t < corpus.sentences[0].tokens.size(); ++t) {
      benchmark::DoNotOptimize(
          extract_features(corpus.sentences[0], t, config));
    }
  }
}
BENCHMARK(BM_ExtractFeatures);

void BM_EncodeSentence(benchmark::State& state) {
  Corpus corpus = sample_corpus();
  FeatureTemplateConfig config;
  FeatureIndex index = build_feature_index(corpus, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        encode_sentence(corpus.sentences[0], index, config));
  }
}
BENCHMARK(BM_EncodeSentence);

void BM_TagSentence(benchmark::State& state) {
  Corpus corpus = sample_corpus();
  FeatureTemplateConfig config;
  FeatureIndex index = build_feature_index(corpus, config);
  CrfModel model = CrfModel::zeros(index, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tag_sentence(model, corpus.sentences[0]));
  }
}
BENCHMARK(BM_TagSentence);

void BM_AnonymizeText(benchmark::State& state) {
  Corpus corpus = sample_corpus();
  FeatureTemplateConfig config;
  FeatureIndex index = build_feature_index(corpus, config);
  CrfModel model = CrfModel::zeros(index, config);
  Strategy strategy;
  std::string text =
      "Thousands of demonstrators have marched through London to protest "
      "the war in Iraq. The rally ended peacefully.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(anonymize_raw_text(text, model, strategy));
  }
}
BENCHMARK(BM_AnonymizeText);

}  // namespace

BENCHMARK_MAIN();
