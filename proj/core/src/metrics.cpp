#include "textanon/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <tuple>

#include "textanon/errors.hpp"

namespace textanon {

double precision(const Counts& c) {
  const long long denom = c.tp + c.fp;
  return denom > 0 ? static_cast<double>(c.tp) / static_cast<double>(denom)
                   : 0.0;
}

double recall(const Counts& c) {
  const long long denom = c.tp + c.fn;
  return denom > 0 ? static_cast<double>(c.tp) / static_cast<double>(denom)
                   : 0.0;
}

double f1(const Counts& c) {
  const long long denom = 2 * c.tp + c.fp + c.fn;
  return denom > 0
             ? 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom)
             : 0.0;
}

std::map<std::string, Counts> token_counts(
    std::span<const std::vector<std::string>> gold,
    std::span<const std::vector<std::string>> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("sentence count mismatch: gold has " +
                    std::to_string(gold.size()) + ", predictions have " +
                    std::to_string(pred.size()));
  }
  std::map<std::string, Counts> counts;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw DataError("length mismatch at sentence " + std::to_string(s + 1) +
                      ": gold has " + std::to_string(gold[s].size()) +
                      " tokens, prediction has " +
                      std::to_string(pred[s].size()));
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      const std::string& g = gold[s][t];
      const std::string& p = pred[s][t];
      if (g == p) {
        ++counts[g].tp;
      } else {
        ++counts[g].fn;
        ++counts[p].fp;
      }
    }
  }
  return counts;
}

std::map<std::string, Counts> span_counts(
    std::span<const std::vector<EntitySpan>> gold,
    std::span<const std::vector<EntitySpan>> pred) {
  if (gold.size() != pred.size()) {
    throw DataError("sentence count mismatch: gold has " +
                    std::to_string(gold.size()) + ", predictions have " +
                    std::to_string(pred.size()));
  }
  std::map<std::string, Counts> counts;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    std::set<std::tuple<std::size_t, std::size_t, std::string>> unmatched;
    for (const auto& g : gold[s]) {
      unmatched.emplace(g.start, g.end, g.category);
    }
    for (const auto& p : pred[s]) {
      auto it = unmatched.find({p.start, p.end, p.category});
      if (it != unmatched.end()) {
        unmatched.erase(it);
        ++counts[p.category].tp;
      } else {
        ++counts[p.category].fp;
      }
    }
    for (const auto& [start, end, category] : unmatched) {
      ++counts[category].fn;
    }
  }
  return counts;
}

EvalReport weighted_report(const std::map<std::string, Counts>& counts,
                           EvalMode mode, bool include_o) {
  EvalReport report;
  report.mode = mode;
  report.include_o = include_o;

  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  long long total = 0;
  for (const auto& [key, c] : counts) {
    KeyScores scores;
    scores.counts = c;
    scores.precision = precision(c);
    scores.recall = recall(c);
    scores.f1 = f1(c);
    scores.support = c.tp + c.fn;
    if (c.tp + c.fp == 0) {
      report.flags.push_back("precision undefined for '" + key +
                             "' (no predictions); reported as 0");
    }
    if (c.tp + c.fn == 0) {
      report.flags.push_back("recall undefined for '" + key +
                             "' (no gold instances); reported as 0");
    }
    if (2 * c.tp + c.fp + c.fn == 0) {
      report.flags.push_back("f1 undefined for '" + key +
                             "' (no gold instances or predictions); "
                             "reported as 0");
    }
    report.per_key.emplace(key, scores);

    if (key == "O" && !include_o) continue;
    const double w = static_cast<double>(scores.support);
    sum_p += w * scores.precision;
    sum_r += w * scores.recall;
    sum_f += w * scores.f1;
    total += scores.support;
  }

  report.total_support = total;
  if (total > 0) {
    report.weighted_precision = sum_p / static_cast<double>(total);
    report.weighted_recall = sum_r / static_cast<double>(total);
    report.weighted_f1 = sum_f / static_cast<double>(total);
  } else {
    report.flags.push_back(
        "weighted averages undefined (zero total support); reported as 0");
  }
  return report;
}

std::string render_table(const EvalReport& report) {
  std::size_t key_width = std::string("weighted avg").size();
  for (const auto& [key, scores] : report.per_key) {
    key_width = std::max(key_width, key.size());
  }

  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(static_cast<int>(key_width)) << ""
      << std::right << std::setw(11) << "precision" << std::setw(9)
      << "recall" << std::setw(10) << "f1-score" << std::setw(10) << "support"
      << '\n';
  auto row = [&](const std::string& key, double p, double r, double f,
                 long long support) {
    out << std::left << std::setw(static_cast<int>(key_width)) << key
        << std::right << std::setw(11) << p << std::setw(9) << r
        << std::setw(10) << f << std::setw(10) << support << '\n';
  };
  for (const auto& [key, scores] : report.per_key) {
    row(key, scores.precision, scores.recall, scores.f1, scores.support);
  }
  out << '\n';
  row("weighted avg", report.weighted_precision, report.weighted_recall,
      report.weighted_f1, report.total_support);
  for (const auto& flag : report.flags) {
    out << "note: " << flag << '\n';
  }
  return out.str();
}

}  // namespace textanon
