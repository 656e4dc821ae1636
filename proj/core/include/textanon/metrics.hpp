#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "textanon/corpus.hpp"

namespace textanon {

struct Counts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

// Each returns 0 when its denominator is zero; weighted_report records a
// flag for every such case.
double precision(const Counts& c);
double recall(const Counts& c);
double f1(const Counts& c);

enum class EvalMode { token, span };

// Token-level counts per tag: a position with gold == pred credits that tag
// with a TP; a disagreement charges FN to the gold tag and FP to the
// predicted tag. DataError on sentence-count or length mismatches, naming
// the sentence.
std::map<std::string, Counts> token_counts(
    std::span<const std::vector<std::string>> gold,
    std::span<const std::vector<std::string>> pred);

// Span-level counts per category: a predicted span is a TP only when a gold
// span with identical boundaries and category exists.
std::map<std::string, Counts> span_counts(
    std::span<const std::vector<EntitySpan>> gold,
    std::span<const std::vector<EntitySpan>> pred);

struct KeyScores {
  Counts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long support = 0;  // tp + fn
};

struct EvalReport {
  EvalMode mode = EvalMode::token;
  bool include_o = false;
  std::map<std::string, KeyScores> per_key;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  long long total_support = 0;  // over the keys that enter the averages
  std::vector<std::string> flags;
};

// Support-weighted averages; "O" is left out unless include_o. The result
// depends only on the counts map, not on how it was assembled.
EvalReport weighted_report(const std::map<std::string, Counts>& counts,
                           EvalMode mode, bool include_o = false);

// Fixed-width human-readable table, one row per key plus the weighted row.
std::string render_table(const EvalReport& report);

}  // namespace textanon
