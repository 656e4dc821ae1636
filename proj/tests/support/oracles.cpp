#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace testsupport {

using textanon::CrfModel;
using textanon::EncodedSentence;
using textanon::Gradient;

double oracle_score(const CrfModel& model, const EncodedSentence& sentence,
                    const std::vector<std::uint32_t>& labels) {
  const std::size_t L = model.label_count();
  double score = 0.0;
  for (std::size_t t = 0; t < sentence.length; ++t) {
    for (std::uint32_t f : sentence.active[t]) {
      score += model.unary_weights[std::size_t{f} * L + labels[t]];
    }
    if (t > 0) {
      score += model.transition_weights[labels[t - 1] * L + labels[t]];
    }
  }
  return score;
}

void for_each_sequence(
    std::size_t length, std::size_t labels,
    const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  std::vector<std::uint32_t> seq(length, 0);
  for (;;) {
    visit(seq);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (++seq[pos] < labels) break;
      seq[pos] = 0;
      if (pos == 0) return;
    }
    if (length == 0) return;
  }
}

namespace {

// Stable log of a sum of exponentials collected from all sequences.
double log_sum(const std::vector<double>& scores) {
  double mx = scores[0];
  for (double s : scores) mx = std::max(mx, s);
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - mx);
  return mx + std::log(sum);
}

std::vector<double> all_scores(const CrfModel& model,
                               const EncodedSentence& sentence) {
  std::vector<double> scores;
  for_each_sequence(sentence.length, model.label_count(),
                    [&](const std::vector<std::uint32_t>& seq) {
                      scores.push_back(oracle_score(model, sentence, seq));
                    });
  return scores;
}

}  // namespace

double oracle_log_partition(const CrfModel& model,
                            const EncodedSentence& sentence) {
  return log_sum(all_scores(model, sentence));
}

std::vector<double> oracle_node_marginals(const CrfModel& model,
                                          const EncodedSentence& sentence) {
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  const double log_z = oracle_log_partition(model, sentence);
  std::vector<double> node(T * L, 0.0);
  for_each_sequence(T, L, [&](const std::vector<std::uint32_t>& seq) {
    const double p = std::exp(oracle_score(model, sentence, seq) - log_z);
    for (std::size_t t = 0; t < T; ++t) node[t * L + seq[t]] += p;
  });
  return node;
}

std::vector<double> oracle_edge_marginals(const CrfModel& model,
                                          const EncodedSentence& sentence) {
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  const double log_z = oracle_log_partition(model, sentence);
  if (T < 2) return {};
  std::vector<double> edge((T - 1) * L * L, 0.0);
  for_each_sequence(T, L, [&](const std::vector<std::uint32_t>& seq) {
    const double p = std::exp(oracle_score(model, sentence, seq) - log_z);
    for (std::size_t t = 0; t + 1 < T; ++t) {
      edge[(t * L + seq[t]) * L + seq[t + 1]] += p;
    }
  });
  return edge;
}

std::pair<std::vector<std::uint32_t>, double> oracle_argmax(
    const CrfModel& model, const EncodedSentence& sentence) {
  std::vector<std::uint32_t> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for_each_sequence(sentence.length, model.label_count(),
                    [&](const std::vector<std::uint32_t>& seq) {
                      const double s = oracle_score(model, sentence, seq);
                      if (s > best_score) {
                        best_score = s;
                        best = seq;
                      }
                    });
  return {best, best_score};
}

Gradient finite_difference_gradient(
    const CrfModel& model, std::span<const EncodedSentence> batch, double l2,
    double step) {
  CrfModel probe = model;
  auto objective_at = [&]() {
    return nll_and_gradient(probe, batch, l2).first;
  };
  Gradient grad;
  grad.unary.resize(model.unary_weights.size());
  grad.transition.resize(model.transition_weights.size());
  for (std::size_t k = 0; k < model.unary_weights.size(); ++k) {
    const double saved = probe.unary_weights[k];
    probe.unary_weights[k] = saved + step;
    const double hi = objective_at();
    probe.unary_weights[k] = saved - step;
    const double lo = objective_at();
    probe.unary_weights[k] = saved;
    grad.unary[k] = (hi - lo) / (2.0 * step);
  }
  for (std::size_t k = 0; k < model.transition_weights.size(); ++k) {
    const double saved = probe.transition_weights[k];
    probe.transition_weights[k] = saved + step;
    const double hi = objective_at();
    probe.transition_weights[k] = saved - step;
    const double lo = objective_at();
    probe.transition_weights[k] = saved;
    grad.transition[k] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

}  // namespace testsupport
