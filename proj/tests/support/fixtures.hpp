#pragma once

// Shared fixtures: the 13-token demonstration sentence and the 14-tag schema
// used across the test suites.

#include <string>
#include <vector>

#include "textanon/corpus.hpp"

namespace testsupport {

inline const char* kSampleCsv =
    "Sentence #,Word,POS,Tag\n"
    "Sentence 1,Thousands,NNS,O\n"
    ",of,IN,O\n"
    ",demonstrators,NNS,O\n"
    ",have,VBP,O\n"
    ",marched,VBN,O\n"
    ",through,IN,O\n"
    ",London,NNP,B-geo\n"
    ",to,TO,O\n"
    ",protest,VB,O\n"
    ",the,DT,O\n"
    ",war,NN,O\n"
    ",in,IN,O\n"
    ",Iraq,NNP,B-geo\n";

inline textanon::Sentence sample_sentence() {
  using textanon::Token;
  textanon::Sentence s;
  s.id = "Sentence 1";
  s.tokens = {
      Token{"Thousands", "NNS", "O"},     Token{"of", "IN", "O"},
      Token{"demonstrators", "NNS", "O"}, Token{"have", "VBP", "O"},
      Token{"marched", "VBN", "O"},       Token{"through", "IN", "O"},
      Token{"London", "NNP", "B-geo"},    Token{"to", "TO", "O"},
      Token{"protest", "VB", "O"},        Token{"the", "DT", "O"},
      Token{"war", "NN", "O"},            Token{"in", "IN", "O"},
      Token{"Iraq", "NNP", "B-geo"},
  };
  return s;
}

// The full 14-tag inventory of the dataset family.
inline std::vector<std::string> full_tagset() {
  return {"O",     "B-geo", "B-gpe", "B-per", "I-geo", "B-org", "I-org",
          "B-tim", "B-art", "I-art", "I-per", "I-gpe", "I-tim", "B-nat"};
}

inline textanon::TagSchema full_schema() {
  return textanon::TagSchema(full_tagset());
}

}  // namespace testsupport
