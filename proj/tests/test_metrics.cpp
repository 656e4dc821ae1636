#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "textanon/errors.hpp"
#include "textanon/metrics.hpp"

using namespace textanon;

namespace {

bool near(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("scores from one true positive and one miss") {
  Counts c{1, 0, 1};
  CHECK(near(precision(c), 1.0));
  CHECK(near(recall(c), 0.5));
  CHECK(near(f1(c), 2.0 / 3.0));
}

TEST_CASE("zero denominators yield zero, not NaN") {
  Counts nothing{0, 0, 0};
  CHECK(precision(nothing) == 0.0);
  CHECK(recall(nothing) == 0.0);
  CHECK(f1(nothing) == 0.0);

  Counts only_fn{0, 0, 3};
  CHECK(precision(only_fn) == 0.0);
  CHECK(recall(only_fn) == 0.0);

  Counts only_fp{0, 3, 0};
  CHECK(recall(only_fp) == 0.0);
  CHECK(precision(only_fp) == 0.0);
}

TEST_CASE("f1 is the harmonic mean whenever it is defined") {
  for (long long tp : {1, 3, 10}) {
    for (long long fp : {0, 2, 7}) {
      for (long long fn : {0, 1, 5}) {
        Counts c{tp, fp, fn};
        double p = precision(c);
        double r = recall(c);
        CHECK(near(f1(c), 2.0 * p * r / (p + r), 1e-12));
      }
    }
  }
}

TEST_CASE("swapping fp and fn swaps precision and recall") {
  Counts c{4, 2, 7};
  Counts swapped{4, 7, 2};
  CHECK(near(precision(c), recall(swapped)));
  CHECK(near(recall(c), precision(swapped)));
  CHECK(near(f1(c), f1(swapped)));
}

TEST_CASE("token counts credit agreement and charge both sides of an error") {
  std::vector<std::vector<std::string>> gold = {{"B-geo", "O", "B-per"}};
  std::vector<std::vector<std::string>> pred = {{"B-geo", "B-per", "O"}};
  auto counts = token_counts(gold, pred);

  CHECK(counts.at("B-geo") == Counts{1, 0, 0});
  CHECK(counts.at("O") == Counts{0, 1, 1});
  CHECK(counts.at("B-per") == Counts{0, 1, 1});
}

TEST_CASE("token counts accumulate across sentences") {
  std::vector<std::vector<std::string>> gold = {{"B-geo", "O"},
                                                {"O", "B-geo"}};
  std::vector<std::vector<std::string>> pred = {{"B-geo", "O"},
                                                {"O", "O"}};
  auto counts = token_counts(gold, pred);
  CHECK(counts.at("B-geo") == Counts{1, 0, 1});
  CHECK(counts.at("O") == Counts{2, 1, 0});
}

TEST_CASE("token counts validate alignment") {
  std::vector<std::vector<std::string>> gold = {{"O", "O"}, {"O"}};
  std::vector<std::vector<std::string>> one = {{"O", "O"}};
  CHECK_THROWS_AS(token_counts(gold, one), DataError);

  std::vector<std::vector<std::string>> misaligned = {{"O", "O"}, {"O", "O"}};
  CHECK_THROWS_WITH_AS(token_counts(gold, misaligned),
                       doctest::Contains("sentence 2"), DataError);
}

TEST_CASE("span counts demand exact boundaries and category") {
  std::vector<std::vector<EntitySpan>> gold = {
      {{0, 1, "geo"}, {3, 3, "per"}}};
  std::vector<std::vector<EntitySpan>> pred = {
      {{0, 1, "geo"}, {3, 4, "per"}}};
  auto counts = span_counts(gold, pred);
  CHECK(counts.at("geo") == Counts{1, 0, 0});
  CHECK(counts.at("per") == Counts{0, 1, 1});

  std::vector<std::vector<EntitySpan>> wrong_cat = {{{0, 1, "org"}}};
  auto cat = span_counts(gold, wrong_cat);
  CHECK(cat.at("org") == Counts{0, 1, 0});
  CHECK(cat.at("geo") == Counts{0, 0, 1});
  CHECK(cat.at("per") == Counts{0, 0, 1});
}

TEST_CASE("span counts validate sentence alignment") {
  std::vector<std::vector<EntitySpan>> gold = {{}, {}};
  std::vector<std::vector<EntitySpan>> pred = {{}};
  CHECK_THROWS_AS(span_counts(gold, pred), DataError);
}

TEST_CASE("weighted averages are support-weighted and skip O by default") {
  std::map<std::string, Counts> counts = {
      {"B-geo", {8, 2, 2}},   // P 0.8, R 0.8, support 10
      {"B-per", {3, 1, 2}},   // P 0.75, R 0.6, support 5
      {"O", {100, 0, 0}},
  };
  EvalReport report = weighted_report(counts, EvalMode::token);

  CHECK(report.total_support == 15);
  double p = (10 * 0.8 + 5 * 0.75) / 15.0;
  double r = (10 * 0.8 + 5 * 0.6) / 15.0;
  CHECK(near(report.weighted_precision, p, 1e-12));
  CHECK(near(report.weighted_recall, r, 1e-12));
  double f_geo = f1(counts.at("B-geo"));
  double f_per = f1(counts.at("B-per"));
  CHECK(near(report.weighted_f1, (10 * f_geo + 5 * f_per) / 15.0, 1e-12));

  CHECK(report.per_key.count("O") == 1);  // reported, just not averaged
  CHECK(report.flags.empty());

  EvalReport with_o = weighted_report(counts, EvalMode::token, true);
  CHECK(with_o.total_support == 115);
  CHECK(with_o.weighted_precision > report.weighted_precision);
}

TEST_CASE("a zero-support key contributes nothing but is flagged") {
  std::map<std::string, Counts> counts = {
      {"B-geo", {10, 0, 0}},
      {"B-art", {0, 0, 0}},
  };
  EvalReport report = weighted_report(counts, EvalMode::token);
  CHECK(report.total_support == 10);
  CHECK(near(report.weighted_precision, 1.0));
  CHECK(near(report.weighted_recall, 1.0));
  CHECK(near(report.weighted_f1, 1.0));
  CHECK_FALSE(report.flags.empty());
}

TEST_CASE("all-zero counts flag the empty average") {
  std::map<std::string, Counts> counts = {{"B-geo", {0, 0, 0}}};
  EvalReport report = weighted_report(counts, EvalMode::token);
  CHECK(report.total_support == 0);
  CHECK(report.weighted_f1 == 0.0);
  CHECK_FALSE(report.flags.empty());
}

TEST_CASE("only false positives leave recall undefined and flagged") {
  std::map<std::string, Counts> counts = {{"B-geo", {0, 4, 0}}};
  EvalReport report = weighted_report(counts, EvalMode::token);
  CHECK(report.per_key.at("B-geo").precision == 0.0);
  CHECK(report.per_key.at("B-geo").recall == 0.0);
  CHECK_FALSE(report.flags.empty());
}

TEST_CASE("the report depends only on the counts") {
  std::vector<std::vector<std::string>> gold = {{"B-geo", "O"}};
  std::vector<std::vector<std::string>> pred = {{"B-geo", "O"}};
  EvalReport from_tokens =
      weighted_report(token_counts(gold, pred), EvalMode::token);

  std::map<std::string, Counts> manual = {{"B-geo", {1, 0, 0}},
                                          {"O", {1, 0, 0}}};
  EvalReport from_manual = weighted_report(manual, EvalMode::token);
  CHECK(from_tokens.weighted_f1 == from_manual.weighted_f1);
  CHECK(from_tokens.total_support == from_manual.total_support);
}

TEST_CASE("the rendered table carries rows, averages and notes") {
  std::map<std::string, Counts> counts = {
      {"B-geo", {8, 2, 2}},
      {"B-art", {0, 0, 0}},
  };
  EvalReport report = weighted_report(counts, EvalMode::token);
  std::string table = render_table(report);

  CHECK(table.find("B-geo") != std::string::npos);
  CHECK(table.find("0.8000") != std::string::npos);
  CHECK(table.find("weighted avg") != std::string::npos);
  CHECK(table.find("note:") != std::string::npos);

  EvalReport clean = weighted_report(
      std::map<std::string, Counts>{{"B-geo", {1, 0, 0}}}, EvalMode::token);
  CHECK(render_table(clean).find("note:") == std::string::npos);
  CHECK(render_table(clean).find("1.0000") != std::string::npos);
}
