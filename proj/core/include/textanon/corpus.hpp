#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace textanon {

struct Token {
  std::string word;
  std::optional<std::string> pos;
  std::string tag;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// The closed label set of a corpus: "O" plus B-/I- tags, sorted
// lexicographically so label indices are reproducible.
class TagSchema {
 public:
  TagSchema();
  explicit TagSchema(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& categories() const { return categories_; }
  std::size_t size() const { return labels_.size(); }

  bool contains(std::string_view label) const;
  std::uint32_t index_of(std::string_view label) const;  // DataError if absent
  const std::string& label_at(std::uint32_t index) const;

  // "B-geo" -> "geo", "O" -> nullopt
  static std::optional<std::string> category_of(std::string_view label);

  friend bool operator==(const TagSchema& a, const TagSchema& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> categories_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
};

struct Corpus {
  std::vector<Sentence> sentences;
  TagSchema schema;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Token positions [start, end], end inclusive.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string category;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct CorpusFormat {
  char delimiter = ',';
  std::string marker_column = "Sentence #";
  std::string word_column = "Word";
  std::string pos_column = "POS";
  std::string tag_column = "Tag";
};

struct ParseReport {
  std::size_t rows = 0;
  std::size_t sentences = 0;
  std::map<std::string, std::size_t> tag_histogram;
};

struct ParseResult {
  Corpus corpus;
  ParseReport report;
};

// Reads the delimited token-per-row format: a non-empty marker cell starts a
// new sentence, an empty one continues the current sentence. A header row is
// detected by the configured column names; without one, columns are
// positional (marker, word[, pos], tag). Errors carry 1-based line numbers.
ParseResult parse_corpus(std::istream& in, const CorpusFormat& format = {});
ParseResult parse_corpus_file(const std::string& path,
                              const CorpusFormat& format = {});

// Writes with a header row; parse(write(c)) == c.
void write_corpus(const Corpus& corpus, std::ostream& out,
                  const CorpusFormat& format = {});
void write_corpus_file(const Corpus& corpus, const std::string& path,
                       const CorpusFormat& format = {});

// BIO -> spans, repairing malformed input: an I-X with no live X span acts
// as B-X. Spans come back sorted by start.
std::vector<EntitySpan> decode_spans(std::span<const std::string> tags,
                                     const TagSchema& schema);
std::vector<EntitySpan> decode_spans(const Sentence& sentence,
                                     const TagSchema& schema);

// Spans -> BIO over a sequence of `length` tokens. DataError on
// out-of-bounds or overlapping spans.
std::vector<std::string> encode_spans(std::span<const EntitySpan> spans,
                                      std::size_t length);

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Sentence-level split; dev/test sizes are round(ratio * n), the remainder
// goes to train. Same seed, same partition. Every part keeps the full parent
// schema. Relative sentence order is preserved inside each part.
CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios,
                         std::uint64_t seed);

}  // namespace textanon
