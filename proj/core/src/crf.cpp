#include "textanon/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "textanon/errors.hpp"
#include "textanon/rng.hpp"

namespace textanon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kAdaGradEps = 1e-8;

double log_sum_exp(const double* v, std::size_t n) {
  double mx = v[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, v[i]);
  if (mx == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(v[i] - mx);
  return mx + std::log(sum);
}

// u[j] = sum over active observation features of their weight for label j.
void position_scores(const CrfModel& model, const EncodedSentence& sentence,
                     std::size_t t, double* u) {
  const std::size_t L = model.label_count();
  std::fill(u, u + L, 0.0);
  for (std::uint32_t f : sentence.active[t]) {
    const double* row = model.unary_weights.data() + std::size_t{f} * L;
    for (std::size_t j = 0; j < L; ++j) u[j] += row[j];
  }
}

// T x L matrix of position scores for one sentence.
std::vector<double> score_lattice(const CrfModel& model,
                                  const EncodedSentence& sentence) {
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  std::vector<double> lattice(T * L);
  for (std::size_t t = 0; t < T; ++t) {
    position_scores(model, sentence, t, lattice.data() + t * L);
  }
  return lattice;
}

void check_sentence(const CrfModel& model, const EncodedSentence& sentence) {
  if (sentence.length == 0) throw DataError("empty encoded sentence");
  if (sentence.active.size() != sentence.length) {
    throw DataError("encoded sentence is inconsistent: " +
                    std::to_string(sentence.active.size()) +
                    " feature rows for length " +
                    std::to_string(sentence.length));
  }
  const std::size_t U = model.feature_count();
  for (const auto& ids : sentence.active) {
    for (std::uint32_t f : ids) {
      if (f >= U) {
        throw DataError("feature id " + std::to_string(f) +
                        " out of range for " + std::to_string(U) +
                        " features");
      }
    }
  }
}

void check_labels(const CrfModel& model, const EncodedSentence& sentence,
                  std::span<const std::uint32_t> labels) {
  if (labels.size() != sentence.length) {
    throw DataError("label sequence length " + std::to_string(labels.size()) +
                    " does not match sentence length " +
                    std::to_string(sentence.length));
  }
  for (std::uint32_t y : labels) {
    if (y >= model.label_count()) {
      throw DataError("label id " + std::to_string(y) +
                      " out of range for " +
                      std::to_string(model.label_count()) + " labels");
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
}

CrfModel CrfModel::zeros(FeatureIndex index, FeatureTemplateConfig config) {
  CrfModel model;
  model.index = std::move(index);
  model.config = std::move(config);
  model.unary_weights.assign(
      model.index.feature_count() * model.index.label_count(), 0.0);
  model.transition_weights.assign(
      model.index.label_count() * model.index.label_count(), 0.0);
  return model;
}

void CrfModel::check_shapes() const {
  const std::size_t U = index.feature_count();
  const std::size_t L = index.label_count();
  if (L == 0) throw DataError("model has an empty label set");
  if (unary_weights.size() != U * L) {
    throw DataError("unary weight block has " +
                    std::to_string(unary_weights.size()) +
                    " entries, expected " + std::to_string(U * L));
  }
  if (transition_weights.size() != L * L) {
    throw DataError("transition weight block has " +
                    std::to_string(transition_weights.size()) +
                    " entries, expected " + std::to_string(L * L));
  }
  if (config.fingerprint() != index.config_fingerprint()) {
    throw ConfigError(
        "model template config does not match the feature index");
  }
}

double score_sequence(const CrfModel& model, const EncodedSentence& sentence,
                      std::span<const std::uint32_t> labels) {
  check_sentence(model, sentence);
  check_labels(model, sentence, labels);
  const std::size_t L = model.label_count();
  double score = 0.0;
  for (std::size_t t = 0; t < sentence.length; ++t) {
    for (std::uint32_t f : sentence.active[t]) {
      score += model.unary_weights[std::size_t{f} * L + labels[t]];
    }
    if (t > 0) score += model.transition(labels[t - 1], labels[t]);
  }
  return score;
}

double log_partition(const CrfModel& model, const EncodedSentence& sentence) {
  check_sentence(model, sentence);
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  std::vector<double> prev(L), cur(L), u(L), cand(L);
  position_scores(model, sentence, 0, prev.data());
  for (std::size_t t = 1; t < T; ++t) {
    position_scores(model, sentence, t, u.data());
    for (std::size_t j = 0; j < L; ++j) {
      for (std::size_t i = 0; i < L; ++i) {
        cand[i] = prev[i] + model.transition_weights[i * L + j];
      }
      cur[j] = log_sum_exp(cand.data(), L) + u[j];
    }
    std::swap(prev, cur);
  }
  return log_sum_exp(prev.data(), L);
}

double log_partition_backward(const CrfModel& model,
                              const EncodedSentence& sentence) {
  check_sentence(model, sentence);
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  std::vector<double> next(L, 0.0), cur(L), u(L), cand(L);
  for (std::size_t t = T - 1; t > 0; --t) {
    position_scores(model, sentence, t, u.data());
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        cand[j] = model.transition_weights[i * L + j] + u[j] + next[j];
      }
      cur[i] = log_sum_exp(cand.data(), L);
    }
    std::swap(next, cur);
  }
  position_scores(model, sentence, 0, u.data());
  for (std::size_t j = 0; j < L; ++j) cand[j] = u[j] + next[j];
  return log_sum_exp(cand.data(), L);
}

double sequence_probability(const CrfModel& model,
                            const EncodedSentence& sentence,
                            std::span<const std::uint32_t> labels) {
  return std::exp(score_sequence(model, sentence, labels) -
                  log_partition(model, sentence));
}

Posterior posteriors(const CrfModel& model, const EncodedSentence& sentence) {
  check_sentence(model, sentence);
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  const std::vector<double> lattice = score_lattice(model, sentence);
  const double* trans = model.transition_weights.data();

  std::vector<double> alpha(T * L), beta(T * L), cand(L);
  for (std::size_t j = 0; j < L; ++j) alpha[j] = lattice[j];
  for (std::size_t t = 1; t < T; ++t) {
    const double* ap = alpha.data() + (t - 1) * L;
    double* ac = alpha.data() + t * L;
    for (std::size_t j = 0; j < L; ++j) {
      for (std::size_t i = 0; i < L; ++i) cand[i] = ap[i] + trans[i * L + j];
      ac[j] = log_sum_exp(cand.data(), L) + lattice[t * L + j];
    }
  }
  for (std::size_t j = 0; j < L; ++j) beta[(T - 1) * L + j] = 0.0;
  for (std::size_t t = T - 1; t > 0; --t) {
    const double* bn = beta.data() + t * L;
    double* bc = beta.data() + (t - 1) * L;
    const double* ut = lattice.data() + t * L;
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < L; ++j) {
        cand[j] = trans[i * L + j] + ut[j] + bn[j];
      }
      bc[i] = log_sum_exp(cand.data(), L);
    }
  }

  Posterior post;
  post.length = T;
  post.labels = L;
  post.log_z = log_sum_exp(alpha.data() + (T - 1) * L, L);
  post.node_marginals.resize(T * L);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < L; ++j) {
      post.node_marginals[t * L + j] =
          std::exp(alpha[t * L + j] + beta[t * L + j] - post.log_z);
    }
  }
  if (T > 1) {
    post.edge_marginals.resize((T - 1) * L * L);
    for (std::size_t t = 0; t + 1 < T; ++t) {
      for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
          post.edge_marginals[(t * L + i) * L + j] =
              std::exp(alpha[t * L + i] + trans[i * L + j] +
                       lattice[(t + 1) * L + j] + beta[(t + 1) * L + j] -
                       post.log_z);
        }
      }
    }
  }
  return post;
}

namespace {

// Shared by nll_and_gradient and the training loop: accumulates expected
// minus empirical counts for one sentence into dense buffers and returns its
// data NLL. `touched` collects unary rows written, for sparse updates.
double accumulate_sentence(const CrfModel& model,
                           const EncodedSentence& sentence, double* grad_u,
                           double* grad_t,
                           std::vector<std::uint32_t>* touched,
                           std::vector<std::uint8_t>* touched_mark) {
  if (!sentence.gold) {
    throw DataError("training sentence has no gold labels");
  }
  const auto& gold = *sentence.gold;
  check_labels(model, sentence, gold);
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  const Posterior post = posteriors(model, sentence);
  const double nll =
      post.log_z - score_sequence(model, sentence, gold);

  for (std::size_t t = 0; t < T; ++t) {
    const double* node = post.node_marginals.data() + t * L;
    for (std::uint32_t f : sentence.active[t]) {
      double* row = grad_u + std::size_t{f} * L;
      for (std::size_t j = 0; j < L; ++j) row[j] += node[j];
      row[gold[t]] -= 1.0;
      if (touched && !(*touched_mark)[f]) {
        (*touched_mark)[f] = 1;
        touched->push_back(f);
      }
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const double* edge = post.edge_marginals.data() + t * L * L;
    for (std::size_t k = 0; k < L * L; ++k) grad_t[k] += edge[k];
    grad_t[gold[t] * L + gold[t + 1]] -= 1.0;
  }
  return nll;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::pair<double, Gradient> nll_and_gradient(
    const CrfModel& model, std::span<const EncodedSentence> batch, double l2) {
  if (batch.empty()) throw DataError("empty batch");
  const std::size_t U = model.feature_count();
  const std::size_t L = model.label_count();
  Gradient grad;
  grad.unary.assign(U * L, 0.0);
  grad.transition.assign(L * L, 0.0);
  double obj = 0.0;
  for (const auto& sentence : batch) {
    obj += accumulate_sentence(model, sentence, grad.unary.data(),
                               grad.transition.data(), nullptr, nullptr);
  }
  if (l2 > 0.0) {
    obj += 0.5 * l2 *
           (squared_norm(model.unary_weights) +
            squared_norm(model.transition_weights));
    for (std::size_t k = 0; k < grad.unary.size(); ++k) {
      grad.unary[k] += l2 * model.unary_weights[k];
    }
    for (std::size_t k = 0; k < grad.transition.size(); ++k) {
      grad.transition[k] += l2 * model.transition_weights[k];
    }
  }
  return {obj, std::move(grad)};
}

ViterbiResult viterbi(const CrfModel& model, const EncodedSentence& sentence) {
  check_sentence(model, sentence);
  const std::size_t T = sentence.length;
  const std::size_t L = model.label_count();
  const std::vector<double> lattice = score_lattice(model, sentence);
  const double* trans = model.transition_weights.data();

  std::vector<double> prev(L), cur(L);
  std::vector<std::uint32_t> backptr(T * L, 0);
  for (std::size_t j = 0; j < L; ++j) prev[j] = lattice[j];
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < L; ++j) {
      double best = kNegInf;
      std::uint32_t arg = 0;
      for (std::size_t i = 0; i < L; ++i) {
        double v = prev[i] + trans[i * L + j];
        if (v > best) {  // strict: ties keep the lowest label index
          best = v;
          arg = static_cast<std::uint32_t>(i);
        }
      }
      cur[j] = best + lattice[t * L + j];
      backptr[t * L + j] = arg;
    }
    std::swap(prev, cur);
  }

  std::size_t best_j = 0;
  for (std::size_t j = 1; j < L; ++j) {
    if (prev[j] > prev[best_j]) best_j = j;
  }
  ViterbiResult result;
  result.score = prev[best_j];
  result.labels.assign(T, 0);
  result.labels[T - 1] = static_cast<std::uint32_t>(best_j);
  for (std::size_t t = T - 1; t > 0; --t) {
    result.labels[t - 1] = backptr[t * L + result.labels[t]];
  }
  return result;
}

CrfModel train(std::span<const EncodedSentence> data,
               const FeatureIndex& index,
               const FeatureTemplateConfig& feature_config,
               const TrainConfig& config) {
  config.validate();
  feature_config.validate();
  if (feature_config.fingerprint() != index.config_fingerprint()) {
    throw ConfigError(
        "feature template config does not match the feature index");
  }
  if (data.empty()) throw DataError("training set is empty");

  CrfModel model = CrfModel::zeros(index, feature_config);
  const std::size_t U = model.feature_count();
  const std::size_t L = model.label_count();
  const std::size_t N = data.size();
  const double lambda = config.l2;

  std::vector<double> acc_u(U * L, 0.0), acc_t(L * L, 0.0);
  std::vector<double> grad_u(U * L, 0.0), grad_t(L * L, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint8_t> touched_mark(U, 0);
  touched.reserve(1024);

  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::mt19937_64 gen(config.seed);

  double* theta_u = model.unary_weights.data();
  double* theta_t = model.transition_weights.data();
  double prev_obj = 0.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    deterministic_shuffle(order, gen);
    double data_nll = 0.0;
    for (std::size_t start = 0; start < N;
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(N, start + static_cast<std::size_t>(config.batch_size));
      touched.clear();
      std::fill(grad_t.begin(), grad_t.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        data_nll += accumulate_sentence(model, data[order[b]], grad_u.data(),
                                        grad_t.data(), &touched,
                                        &touched_mark);
      }
      // L2 scaled to the batch fraction, applied to the rows this batch
      // touched (with min_count >= 1 a full batch touches every row, making
      // the penalty exact in full-batch mode).
      const double batch_l2 =
          lambda * static_cast<double>(stop - start) / static_cast<double>(N);
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t f : touched) {
        double* g = grad_u.data() + std::size_t{f} * L;
        double* w = theta_u + std::size_t{f} * L;
        double* a = acc_u.data() + std::size_t{f} * L;
        for (std::size_t j = 0; j < L; ++j) {
          const double gj = g[j] + batch_l2 * w[j];
          a[j] += gj * gj;
          w[j] -= config.learning_rate * gj / (std::sqrt(a[j]) + kAdaGradEps);
          g[j] = 0.0;
        }
        touched_mark[f] = 0;
      }
      for (std::size_t k = 0; k < L * L; ++k) {
        const double gk = grad_t[k] + batch_l2 * theta_t[k];
        acc_t[k] += gk * gk;
        theta_t[k] -=
            config.learning_rate * gk / (std::sqrt(acc_t[k]) + kAdaGradEps);
      }
    }

    double objective = data_nll;
    if (lambda > 0.0) {
      objective += 0.5 * lambda *
                   (squared_norm(model.unary_weights) +
                    squared_norm(model.transition_weights));
    }
    if (!std::isfinite(objective)) {
      throw NumericError("training diverged at epoch " +
                         std::to_string(epoch) +
                         ": objective is not finite");
    }
    model.metadata.epoch_objectives.push_back(objective);
    model.metadata.epochs_run = epoch;
    model.metadata.final_objective = objective;
    if (epoch > 1) {
      const double rel = std::abs(prev_obj - objective) /
                         std::max(std::abs(prev_obj), 1e-12);
      if (rel < config.tolerance) break;
    }
    prev_obj = objective;
  }
  return model;
}

std::vector<std::string> tag_sentence(const CrfModel& model,
                                      const Sentence& sentence,
                                      const FeatureTemplateConfig& config) {
  if (config.fingerprint() != model.index.config_fingerprint()) {
    throw ConfigError(
        "feature template config does not match the one the model was "
        "trained with");
  }
  EncodedSentence enc =
      encode_sentence(sentence, model.index, config, GoldLabels::omit);
  ViterbiResult decoded = viterbi(model, enc);
  std::vector<std::string> tags;
  tags.reserve(decoded.labels.size());
  for (std::uint32_t y : decoded.labels) {
    tags.push_back(model.index.schema().label_at(y));
  }
  return tags;
}

std::vector<std::string> tag_sentence(const CrfModel& model,
                                      const Sentence& sentence) {
  return tag_sentence(model, sentence, model.config);
}

}  // namespace textanon
