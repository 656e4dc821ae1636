#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/features.hpp"

namespace textanon {

struct TrainConfig {
  double l2 = 1e-4;
  int epochs = 20;
  double learning_rate = 0.1;
  int batch_size = 16;
  double tolerance = 1e-5;  // relative objective change for early stop
  std::uint64_t seed = 42;

  void validate() const;  // ConfigError on bad values
};

struct TrainMetadata {
  int epochs_run = 0;
  double final_objective = 0.0;
  std::vector<double> epoch_objectives;
};

// Linear-chain model: unary weights indexed [feature, label] row-major and
// transition weights [from, to]. Position 0 is scored by unary features
// only; there are no dedicated begin/end parameters.
struct CrfModel {
  FeatureIndex index;
  FeatureTemplateConfig config;
  std::vector<double> unary_weights;       // U x L
  std::vector<double> transition_weights;  // L x L
  TrainMetadata metadata;

  static CrfModel zeros(FeatureIndex index, FeatureTemplateConfig config);

  std::size_t feature_count() const { return index.feature_count(); }
  std::size_t label_count() const { return index.label_count(); }

  double unary(std::uint32_t feature, std::uint32_t label) const {
    return unary_weights[feature * label_count() + label];
  }
  double& unary(std::uint32_t feature, std::uint32_t label) {
    return unary_weights[feature * label_count() + label];
  }
  double transition(std::uint32_t from, std::uint32_t to) const {
    return transition_weights[from * label_count() + to];
  }
  double& transition(std::uint32_t from, std::uint32_t to) {
    return transition_weights[from * label_count() + to];
  }

  void check_shapes() const;  // DataError if sizes disagree with the index
};

struct Posterior {
  double log_z = 0.0;
  std::size_t length = 0;
  std::size_t labels = 0;
  std::vector<double> node_marginals;  // T x L
  std::vector<double> edge_marginals;  // (T-1) x L x L

  double node(std::size_t t, std::size_t j) const {
    return node_marginals[t * labels + j];
  }
  double edge(std::size_t t, std::size_t i, std::size_t j) const {
    return edge_marginals[(t * labels + i) * labels + j];
  }
};

struct Gradient {
  std::vector<double> unary;       // U x L
  std::vector<double> transition;  // L x L
};

struct ViterbiResult {
  std::vector<std::uint32_t> labels;
  double score = 0.0;
};

// Unnormalized log score of one label sequence.
double score_sequence(const CrfModel& model, const EncodedSentence& sentence,
                      std::span<const std::uint32_t> labels);

// log Z(x) via the forward recursion in log space.
double log_partition(const CrfModel& model, const EncodedSentence& sentence);

// Same quantity via the backward recursion; kept as a consistency check.
double log_partition_backward(const CrfModel& model,
                              const EncodedSentence& sentence);

double sequence_probability(const CrfModel& model,
                            const EncodedSentence& sentence,
                            std::span<const std::uint32_t> labels);

Posterior posteriors(const CrfModel& model, const EncodedSentence& sentence);

// Negative log-likelihood of the batch plus (l2/2)*||theta||^2, and its
// exact gradient (expected minus empirical counts, plus l2*theta).
// Every sentence must carry gold labels.
std::pair<double, Gradient> nll_and_gradient(
    const CrfModel& model, std::span<const EncodedSentence> batch, double l2);

// Max-product decode; ties broken toward the lowest label index.
ViterbiResult viterbi(const CrfModel& model, const EncodedSentence& sentence);

// AdaGrad mini-batch training from zero-initialized weights. Deterministic
// for a fixed seed. NumericError naming the epoch if the objective turns
// non-finite.
CrfModel train(std::span<const EncodedSentence> data,
               const FeatureIndex& index,
               const FeatureTemplateConfig& feature_config,
               const TrainConfig& config);

// Encode without gold, decode, map indices back to tag strings. The
// explicit-config overload raises ConfigError when the supplied template
// config does not match the one the model was trained with.
std::vector<std::string> tag_sentence(const CrfModel& model,
                                      const Sentence& sentence,
                                      const FeatureTemplateConfig& config);
std::vector<std::string> tag_sentence(const CrfModel& model,
                                      const Sentence& sentence);

}  // namespace textanon
