#pragma once

// Deterministic random-instance builders for the CRF test suites.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "textanon/crf.hpp"

namespace testsupport {

// A schema of `labels` valid tags ("O" plus B-categories).
textanon::TagSchema synthetic_schema(std::size_t labels);

struct RandomInstance {
  textanon::CrfModel model;
  textanon::EncodedSentence sentence;
};

struct InstanceShape {
  std::size_t length = 3;
  std::size_t labels = 3;
  std::size_t features = 6;
  std::size_t active_per_position = 2;
  double max_abs_weight = 2.0;
  bool with_gold = false;
};

// Uniform weights in [-max_abs, max_abs], random active sets, optional
// random gold labels; fully determined by `gen`'s state.
RandomInstance random_instance(std::mt19937_64& gen,
                               const InstanceShape& shape);

// A model over word-identity features only: each listed word is pushed
// toward its tag with weight +8. Every input word must be covered for the
// decode to be meaningful.
textanon::CrfModel lexical_model(
    const std::map<std::string, std::string>& word_tags,
    const std::vector<std::string>& schema_tags);

}  // namespace testsupport
