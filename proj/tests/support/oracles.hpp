#pragma once

// Independent reference implementations used to validate the library's
// dynamic programming. Everything here enumerates the full sequence space
// with plain loops; nothing calls the forward/backward recursions.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "textanon/crf.hpp"

namespace testsupport {

// Reads the raw weight arrays directly; deliberately does not reuse
// textanon::score_sequence.
double oracle_score(const textanon::CrfModel& model,
                    const textanon::EncodedSentence& sentence,
                    const std::vector<std::uint32_t>& labels);

// Visits all L^T label sequences in lexicographic order.
void for_each_sequence(
    std::size_t length, std::size_t labels,
    const std::function<void(const std::vector<std::uint32_t>&)>& visit);

double oracle_log_partition(const textanon::CrfModel& model,
                            const textanon::EncodedSentence& sentence);

// T x L matrix of P(y_t = j | x) by enumeration.
std::vector<double> oracle_node_marginals(
    const textanon::CrfModel& model, const textanon::EncodedSentence& sentence);

// (T-1) x L x L matrix of P(y_t = i, y_{t+1} = j | x) by enumeration.
std::vector<double> oracle_edge_marginals(
    const textanon::CrfModel& model, const textanon::EncodedSentence& sentence);

// Highest-scoring sequence by enumeration. With continuous random weights
// the argmax is unique almost surely; the score is what tests compare.
std::pair<std::vector<std::uint32_t>, double> oracle_argmax(
    const textanon::CrfModel& model, const textanon::EncodedSentence& sentence);

// Central finite differences of the nll_and_gradient objective.
textanon::Gradient finite_difference_gradient(
    const textanon::CrfModel& model,
    std::span<const textanon::EncodedSentence> batch, double l2, double step);

}  // namespace testsupport
