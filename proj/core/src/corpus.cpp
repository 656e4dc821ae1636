#include "textanon/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "textanon/errors.hpp"
#include "textanon/rng.hpp"
#include "textanon/textutil.hpp"

namespace textanon {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

bool valid_tag(std::string_view tag) {
  if (tag == "O") return true;
  if (tag.size() < 3) return false;
  if (tag[0] != 'B' && tag[0] != 'I') return false;
  return tag[1] == '-';
}

struct Row {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

// RFC-4180-style record reader: quoted cells may hold delimiters, doubled
// quotes and newlines. Tracks physical line numbers for error messages.
class DelimitedReader {
 public:
  DelimitedReader(std::istream& in, char delimiter)
      : in_(in), delimiter_(delimiter) {}

  std::optional<Row> next() {
    for (;;) {
      if (!peek_ok()) return std::nullopt;
      Row row;
      row.line = line_;
      std::string cell;
      bool quoted = false;
      bool any_delimiter = false;
      bool any_content = false;
      int c;
      while ((c = in_.get()) != std::char_traits<char>::eof()) {
        char ch = static_cast<char>(c);
        if (quoted) {
          if (ch == '"') {
            if (in_.peek() == '"') {
              in_.get();
              cell.push_back('"');
            } else {
              quoted = false;
            }
          } else {
            if (ch == '\n') ++line_;
            cell.push_back(ch);
          }
          continue;
        }
        if (ch == '"' && cell.empty()) {
          quoted = true;
          any_content = true;
        } else if (ch == delimiter_) {
          row.cells.push_back(std::move(cell));
          cell.clear();
          any_delimiter = true;
        } else if (ch == '\n') {
          ++line_;
          break;
        } else if (ch == '\r') {
          if (in_.peek() == '\n') continue;  // swallowed with the \n branch
          ++line_;
          break;
        } else {
          cell.push_back(ch);
          any_content = true;
        }
      }
      if (quoted) fail_line(row.line, "unterminated quoted cell");
      if (!any_delimiter && !any_content) continue;  // skip blank line
      row.cells.push_back(std::move(cell));
      return row;
    }
  }

 private:
  bool peek_ok() { return in_.peek() != std::char_traits<char>::eof(); }

  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
};

struct ColumnMap {
  std::size_t marker = 0;
  std::size_t word = 1;
  std::optional<std::size_t> pos = 2;
  std::size_t tag = 3;
  std::size_t width = 4;
};

std::optional<ColumnMap> map_header(const std::vector<std::string>& cells,
                                    const CorpusFormat& format,
                                    std::size_t line) {
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (std::string_view(trim(cells[i])) == name) return i;
    }
    return std::nullopt;
  };
  auto marker = find(format.marker_column);
  auto word = find(format.word_column);
  auto tag = find(format.tag_column);
  if (!marker && !word && !tag) return std::nullopt;  // not a header row
  if (!marker || !word || !tag) {
    fail_line(line, "header row is missing one of the columns '" +
                        format.marker_column + "', '" + format.word_column +
                        "', '" + format.tag_column + "'");
  }
  ColumnMap map;
  map.marker = *marker;
  map.word = *word;
  map.pos = find(format.pos_column);
  map.tag = *tag;
  map.width = cells.size();
  return map;
}

ColumnMap positional_columns(std::size_t width, std::size_t line) {
  ColumnMap map;
  if (width == 4) {
    map = ColumnMap{0, 1, 2, 3, 4};
  } else if (width == 3) {
    map = ColumnMap{0, 1, std::nullopt, 2, 3};
  } else {
    fail_line(line, "expected 3 or 4 columns without a header, found " +
                        std::to_string(width));
  }
  return map;
}

std::string quote_cell(const std::string& cell, char delimiter) {
  bool needs = cell.find(delimiter) != std::string::npos ||
               cell.find('"') != std::string::npos ||
               cell.find('\n') != std::string::npos ||
               cell.find('\r') != std::string::npos;
  if (!needs) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

TagSchema::TagSchema() : TagSchema(std::vector<std::string>{}) {}

TagSchema::TagSchema(std::vector<std::string> labels) {
  std::set<std::string> unique(labels.begin(), labels.end());
  unique.insert("O");
  std::set<std::string> cats;
  for (const auto& label : unique) {
    if (!valid_tag(label)) {
      throw DataError("invalid tag '" + label +
                      "': expected 'O' or 'B-<category>'/'I-<category>'");
    }
    if (auto cat = category_of(label)) cats.insert(*cat);
  }
  labels_.assign(unique.begin(), unique.end());
  categories_.assign(cats.begin(), cats.end());
  for (std::uint32_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
}

bool TagSchema::contains(std::string_view label) const {
  return index_.find(label) != index_.end();
}

std::uint32_t TagSchema::index_of(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw DataError("tag '" + std::string(label) + "' is not in the schema");
  }
  return it->second;
}

const std::string& TagSchema::label_at(std::uint32_t index) const {
  if (index >= labels_.size()) {
    throw DataError("label index " + std::to_string(index) +
                    " out of range for schema of size " +
                    std::to_string(labels_.size()));
  }
  return labels_[index];
}

std::optional<std::string> TagSchema::category_of(std::string_view label) {
  if (label == "O") return std::nullopt;
  if (!valid_tag(label)) {
    throw DataError("invalid tag '" + std::string(label) + "'");
  }
  return std::string(label.substr(2));
}

ParseResult parse_corpus(std::istream& in, const CorpusFormat& format) {
  DelimitedReader reader(in, format.delimiter);
  ParseResult result;
  auto& sentences = result.corpus.sentences;
  std::set<std::string> seen_tags;

  std::optional<ColumnMap> columns;
  bool first = true;
  while (auto row = reader.next()) {
    if (first) {
      first = false;
      columns = map_header(row->cells, format, row->line);
      if (columns) continue;  // header consumed
      columns = positional_columns(row->cells.size(), row->line);
    }
    if (row->cells.size() != columns->width) {
      fail_line(row->line, "expected " + std::to_string(columns->width) +
                               " columns, found " +
                               std::to_string(row->cells.size()));
    }
    std::string marker(trim(row->cells[columns->marker]));
    std::string word(trim(row->cells[columns->word]));
    std::string tag(trim(row->cells[columns->tag]));
    std::optional<std::string> pos;
    if (columns->pos) {
      std::string p(trim(row->cells[*columns->pos]));
      if (!p.empty()) pos = std::move(p);
    }

    if (!marker.empty()) {
      sentences.push_back(Sentence{marker, {}});
    } else if (sentences.empty()) {
      fail_line(row->line, "continuation row before any sentence marker");
    }
    if (word.empty()) fail_line(row->line, "empty word cell");
    if (!valid_tag(tag)) {
      fail_line(row->line, "invalid tag '" + tag +
                               "': expected 'O' or 'B-<category>'/"
                               "'I-<category>'");
    }
    sentences.back().tokens.push_back(
        Token{std::move(word), std::move(pos), tag});
    seen_tags.insert(tag);
    ++result.report.tag_histogram[tag];
    ++result.report.rows;
  }

  if (sentences.empty()) throw DataError("corpus contains no token rows");
  result.corpus.schema =
      TagSchema(std::vector<std::string>(seen_tags.begin(), seen_tags.end()));
  result.report.sentences = sentences.size();
  return result;
}

ParseResult parse_corpus_file(const std::string& path,
                              const CorpusFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return parse_corpus(in, format);
}

void write_corpus(const Corpus& corpus, std::ostream& out,
                  const CorpusFormat& format) {
  const char d = format.delimiter;
  out << quote_cell(format.marker_column, d) << d
      << quote_cell(format.word_column, d) << d
      << quote_cell(format.pos_column, d) << d
      << quote_cell(format.tag_column, d) << '\n';
  for (const auto& sentence : corpus.sentences) {
    bool head = true;
    for (const auto& token : sentence.tokens) {
      out << quote_cell(head ? sentence.id : "", d) << d
          << quote_cell(token.word, d) << d
          << quote_cell(token.pos.value_or(""), d) << d
          << quote_cell(token.tag, d) << '\n';
      head = false;
    }
  }
  if (!out) throw DataError("failed writing corpus stream");
}

void write_corpus_file(const Corpus& corpus, const std::string& path,
                       const CorpusFormat& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path);
  write_corpus(corpus, out, format);
}

std::vector<EntitySpan> decode_spans(std::span<const std::string> tags,
                                     const TagSchema& schema) {
  std::vector<EntitySpan> spans;
  std::optional<EntitySpan> open;
  auto close = [&]() {
    if (open) {
      spans.push_back(std::move(*open));
      open.reset();
    }
  };
  for (std::size_t t = 0; t < tags.size(); ++t) {
    const std::string& tag = tags[t];
    if (!schema.contains(tag)) {
      throw DataError("tag '" + tag + "' is not in the schema");
    }
    if (tag == "O") {
      close();
      continue;
    }
    std::string cat(tag.substr(2));
    if (tag[0] == 'B' || !open || open->category != cat) {
      close();
      open = EntitySpan{t, t, std::move(cat)};
    } else {
      open->end = t;
    }
  }
  close();
  return spans;
}

std::vector<EntitySpan> decode_spans(const Sentence& sentence,
                                     const TagSchema& schema) {
  std::vector<std::string> tags;
  tags.reserve(sentence.tokens.size());
  for (const auto& token : sentence.tokens) tags.push_back(token.tag);
  return decode_spans(tags, schema);
}

std::vector<std::string> encode_spans(std::span<const EntitySpan> spans,
                                      std::size_t length) {
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan& a, const EntitySpan& b) {
              return a.start < b.start;
            });
  std::vector<std::string> tags(length, "O");
  std::size_t prev_end = 0;
  bool any = false;
  for (const auto& span : sorted) {
    if (span.end < span.start || span.end >= length) {
      throw DataError("span [" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) +
                      "] out of bounds for sequence of length " +
                      std::to_string(length));
    }
    if (any && span.start <= prev_end) {
      throw DataError("overlapping spans at position " +
                      std::to_string(span.start));
    }
    if (span.category.empty()) throw DataError("span with empty category");
    tags[span.start] = "B-" + span.category;
    for (std::size_t t = span.start + 1; t <= span.end; ++t) {
      tags[t] = "I-" + span.category;
    }
    prev_end = span.end;
    any = true;
  }
  return tags;
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios,
                         std::uint64_t seed) {
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0) {
    throw ConfigError("split ratios must be non-negative");
  }
  double sum = ratios.train + ratios.dev + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1, got " +
                      std::to_string(sum));
  }
  const std::size_t n = corpus.sentences.size();
  if (n == 0) throw DataError("cannot split an empty corpus");

  auto rounded = [n](double r) {
    return static_cast<std::size_t>(std::llround(r * static_cast<double>(n)));
  };
  std::size_t dev_n = std::min(rounded(ratios.dev), n);
  std::size_t test_n = std::min(rounded(ratios.test), n - dev_n);
  std::size_t train_n = n - dev_n - test_n;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 gen(seed);
  deterministic_shuffle(order, gen);

  auto take = [&](std::size_t offset, std::size_t count) {
    std::vector<std::size_t> part(order.begin() + offset,
                                  order.begin() + offset + count);
    std::sort(part.begin(), part.end());
    Corpus out;
    out.schema = corpus.schema;
    out.sentences.reserve(count);
    for (std::size_t i : part) out.sentences.push_back(corpus.sentences[i]);
    return out;
  };

  CorpusSplit split;
  split.train = take(0, train_n);
  split.dev = take(train_n, dev_n);
  split.test = take(train_n + dev_n, test_n);
  return split;
}

}  // namespace textanon
