#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textanon/corpus.hpp"
#include "textanon/crf.hpp"

namespace textanon {

enum class StrategyKind { removal, categorization, pseudonymization };

std::string_view to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(std::string_view name);  // ConfigError

// Replacement surfaces per category, e.g. {"geo": ["Paris", "Oslo"]}.
class PseudonymLexicon {
 public:
  PseudonymLexicon() = default;
  explicit PseudonymLexicon(
      std::map<std::string, std::vector<std::string>> forms);

  bool has(const std::string& category) const;
  // DataError naming the category when it is absent or empty.
  const std::vector<std::string>& forms(const std::string& category) const;
  const std::map<std::string, std::vector<std::string>>& all() const {
    return forms_;
  }

  static PseudonymLexicon load(std::istream& in);  // JSON object of arrays
  static PseudonymLexicon load_file(const std::filesystem::path& path);

 private:
  std::map<std::string, std::vector<std::string>> forms_;
};

struct Strategy {
  StrategyKind kind = StrategyKind::removal;
  // Removal: each character of a masked token becomes this unit, so token
  // lengths survive.
  std::string mask = "*";
  const PseudonymLexicon* lexicon = nullptr;  // pseudonymization only
};

// Document-scoped pseudonym assignment: the same surface always maps to the
// same pseudonym, new surfaces consume lexicon forms in order, and an
// exhausted lexicon wraps around with a numeric suffix ("Paris-2").
class ConsistencyMap {
 public:
  const std::string& pseudonym_for(const std::string& category,
                                   const std::string& original,
                                   const PseudonymLexicon& lexicon);
  std::size_t assigned_count() const { return assigned_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string> assigned_;
  std::map<std::string, std::size_t> issued_;
};

struct AuditRecord {
  std::string sentence_id;
  EntitySpan span;
  std::string original;
  std::string replacement;
  StrategyKind strategy = StrategyKind::removal;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct SentenceAnonymization {
  std::vector<std::string> tokens;
  std::vector<AuditRecord> audits;
};

// Replaces the spans in one tokenized sentence. Non-entity tokens pass
// through untouched; every replacement is audited. DataError for spans out
// of bounds, overlapping spans, or a missing lexicon/category under
// pseudonymization.
SentenceAnonymization anonymize_sentence(const Sentence& sentence,
                                         std::span<const EntitySpan> spans,
                                         const Strategy& strategy,
                                         ConsistencyMap& state);

struct TextAnonymization {
  std::string text;
  std::vector<AuditRecord> audits;
};

// Whole pipeline over raw text: segment, tokenize, tag with the model,
// decode spans, substitute, re-join. Consistency state covers the whole
// document. An explicit lexicon argument overrides strategy.lexicon.
TextAnonymization anonymize_raw_text(std::string_view text,
                                     const CrfModel& model,
                                     const Strategy& strategy,
                                     const PseudonymLexicon* lexicon = nullptr);

// One JSON object per line, one line per replacement.
void write_audit_log(std::span<const AuditRecord> audits, std::ostream& out);

// Sentence segmentation: a run of . ! ? ends a sentence only when followed
// by whitespace or end of text ("3.5" stays whole).
std::vector<std::string> segment_sentences(std::string_view text);

// Whitespace split, then leading/trailing ASCII punctuation detached as
// separate tokens. A chunk of capital letters in square brackets ("[GEO]")
// stays atomic so category placeholders survive re-tokenization.
std::vector<std::string> tokenize(std::string_view sentence_text);

// Inverse of tokenize up to spacing: single spaces, except a trailing run of
// sentence terminators which attaches to the preceding token.
std::string join_tokens(std::span<const std::string> tokens);

}  // namespace textanon
