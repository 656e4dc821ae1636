#include "textanon/anonymizer.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "textanon/errors.hpp"
#include "textanon/textutil.hpp"

namespace textanon {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

// [GEO]-style placeholder: capitals inside square brackets.
bool is_placeholder_chunk(std::string_view chunk) {
  if (chunk.size() < 3 || chunk.front() != '[' || chunk.back() != ']') {
    return false;
  }
  for (std::size_t i = 1; i + 1 < chunk.size(); ++i) {
    if (chunk[i] < 'A' || chunk[i] > 'Z') return false;
  }
  return true;
}

bool is_capital(char c) { return c >= 'A' && c <= 'Z'; }

// "[GEO]..." : the chunk begins with a complete placeholder.
bool opens_placeholder(std::string_view chunk) {
  if (chunk.size() < 3 || chunk.front() != '[') return false;
  std::size_t i = 1;
  while (i < chunk.size() && is_capital(chunk[i])) ++i;
  return i > 1 && i < chunk.size() && chunk[i] == ']';
}

// "...[GEO]" : the chunk ends with a complete placeholder.
bool closes_placeholder(std::string_view chunk) {
  if (chunk.size() < 3 || chunk.back() != ']') return false;
  std::size_t i = chunk.size() - 1;
  while (i > 0 && is_capital(chunk[i - 1])) --i;
  return i < chunk.size() - 1 && i > 0 && chunk[i - 1] == '[';
}

bool is_terminator_token(const std::string& token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), is_terminator);
}

std::string join_words(const Sentence& sentence, const EntitySpan& span) {
  std::string out;
  for (std::size_t t = span.start; t <= span.end; ++t) {
    if (t > span.start) out.push_back(' ');
    out += sentence.tokens[t].word;
  }
  return out;
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::removal: return "removal";
    case StrategyKind::categorization: return "categorization";
    case StrategyKind::pseudonymization: return "pseudonymization";
  }
  return "removal";
}

StrategyKind strategy_kind_from_string(std::string_view name) {
  if (name == "removal") return StrategyKind::removal;
  if (name == "categorization") return StrategyKind::categorization;
  if (name == "pseudonymization") return StrategyKind::pseudonymization;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "': expected removal, categorization or "
                    "pseudonymization");
}

PseudonymLexicon::PseudonymLexicon(
    std::map<std::string, std::vector<std::string>> forms)
    : forms_(std::move(forms)) {
  for (const auto& [category, surfaces] : forms_) {
    if (category.empty()) {
      throw DataError("lexicon has an empty category name");
    }
    for (const auto& surface : surfaces) {
      if (surface.empty()) {
        throw DataError("lexicon category '" + category +
                        "' holds an empty form");
      }
    }
  }
}

bool PseudonymLexicon::has(const std::string& category) const {
  auto it = forms_.find(category);
  return it != forms_.end() && !it->second.empty();
}

const std::vector<std::string>& PseudonymLexicon::forms(
    const std::string& category) const {
  auto it = forms_.find(category);
  if (it == forms_.end() || it->second.empty()) {
    throw DataError("lexicon has no forms for category '" + category + "'");
  }
  return it->second;
}

PseudonymLexicon PseudonymLexicon::load(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("lexicon is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw DataError("lexicon must be a JSON object of category -> [forms]");
  }
  std::map<std::string, std::vector<std::string>> forms;
  for (const auto& [category, value] : j.items()) {
    if (!value.is_array()) {
      throw DataError("lexicon category '" + category +
                      "' must map to an array of strings");
    }
    std::vector<std::string> surfaces;
    for (const auto& v : value) {
      if (!v.is_string()) {
        throw DataError("lexicon category '" + category +
                        "' holds a non-string form");
      }
      surfaces.push_back(v.get<std::string>());
    }
    forms.emplace(category, std::move(surfaces));
  }
  return PseudonymLexicon(std::move(forms));
}

PseudonymLexicon PseudonymLexicon::load_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file: " + path.string());
  return load(in);
}

const std::string& ConsistencyMap::pseudonym_for(
    const std::string& category, const std::string& original,
    const PseudonymLexicon& lexicon) {
  auto key = std::make_pair(category, original);
  auto it = assigned_.find(key);
  if (it != assigned_.end()) return it->second;

  const auto& forms = lexicon.forms(category);
  const std::size_t i = issued_[category]++;
  std::string name = forms[i % forms.size()];
  if (i >= forms.size()) {
    name += "-" + std::to_string(i / forms.size() + 1);
  }
  return assigned_.emplace(std::move(key), std::move(name)).first->second;
}

SentenceAnonymization anonymize_sentence(const Sentence& sentence,
                                         std::span<const EntitySpan> spans,
                                         const Strategy& strategy,
                                         ConsistencyMap& state) {
  const std::size_t length = sentence.tokens.size();
  if (strategy.kind == StrategyKind::removal &&
      utf8_length(strategy.mask) != 1) {
    throw ConfigError("mask must be a single character, got '" +
                      strategy.mask + "'");
  }
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan& a, const EntitySpan& b) {
              return a.start < b.start;
            });

  SentenceAnonymization result;
  std::size_t next = 0;
  for (const auto& span : sorted) {
    if (span.end < span.start || span.end >= length) {
      throw DataError("span [" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) +
                      "] out of bounds for sentence of length " +
                      std::to_string(length));
    }
    if (!result.audits.empty() && span.start < next) {
      throw DataError("overlapping spans at position " +
                      std::to_string(span.start));
    }
    for (; next < span.start; ++next) {
      result.tokens.push_back(sentence.tokens[next].word);
    }

    AuditRecord record;
    record.sentence_id = sentence.id;
    record.span = span;
    record.original = join_words(sentence, span);
    record.strategy = strategy.kind;
    switch (strategy.kind) {
      case StrategyKind::removal: {
        std::string replacement;
        for (std::size_t t = span.start; t <= span.end; ++t) {
          std::string masked = repeat_unit(
              strategy.mask, utf8_length(sentence.tokens[t].word));
          if (t > span.start) replacement.push_back(' ');
          replacement += masked;
          result.tokens.push_back(std::move(masked));
        }
        record.replacement = std::move(replacement);
        break;
      }
      case StrategyKind::categorization: {
        std::string placeholder = "[" + upper_ascii(span.category) + "]";
        result.tokens.push_back(placeholder);
        record.replacement = std::move(placeholder);
        break;
      }
      case StrategyKind::pseudonymization: {
        if (strategy.lexicon == nullptr) {
          throw DataError("pseudonymization requires a lexicon");
        }
        std::string pseudonym = state.pseudonym_for(
            span.category, record.original, *strategy.lexicon);
        result.tokens.push_back(pseudonym);
        record.replacement = std::move(pseudonym);
        break;
      }
    }
    result.audits.push_back(std::move(record));
    next = span.end + 1;
  }
  for (; next < length; ++next) {
    result.tokens.push_back(sentence.tokens[next].word);
  }
  return result;
}

TextAnonymization anonymize_raw_text(std::string_view text,
                                     const CrfModel& model,
                                     const Strategy& strategy,
                                     const PseudonymLexicon* lexicon) {
  Strategy effective = strategy;
  if (lexicon != nullptr) effective.lexicon = lexicon;
  if (effective.kind == StrategyKind::pseudonymization &&
      effective.lexicon == nullptr) {
    throw DataError("pseudonymization requires a lexicon");
  }
  if (effective.kind == StrategyKind::removal &&
      utf8_length(effective.mask) != 1) {
    throw ConfigError("mask must be a single character, got '" +
                      effective.mask + "'");
  }

  TextAnonymization result;
  ConsistencyMap state;
  std::vector<std::string> pieces;
  std::size_t counter = 0;
  for (const auto& sentence_text : segment_sentences(text)) {
    std::vector<std::string> words = tokenize(sentence_text);
    if (words.empty()) continue;
    ++counter;
    Sentence sentence;
    sentence.id = "Sentence " + std::to_string(counter);
    sentence.tokens.reserve(words.size());
    for (auto& word : words) {
      sentence.tokens.push_back(Token{std::move(word), std::nullopt, "O"});
    }
    std::vector<std::string> tags = tag_sentence(model, sentence);
    std::vector<EntitySpan> spans =
        decode_spans(tags, model.index.schema());
    SentenceAnonymization anonymized =
        anonymize_sentence(sentence, spans, effective, state);
    pieces.push_back(join_tokens(anonymized.tokens));
    result.audits.insert(result.audits.end(),
                         std::make_move_iterator(anonymized.audits.begin()),
                         std::make_move_iterator(anonymized.audits.end()));
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) result.text.push_back(' ');
    result.text += pieces[i];
  }
  return result;
}

void write_audit_log(std::span<const AuditRecord> audits, std::ostream& out) {
  for (const auto& record : audits) {
    nlohmann::ordered_json j;
    j["sentence"] = record.sentence_id;
    j["start"] = record.span.start;
    j["end"] = record.span.end;
    j["category"] = record.span.category;
    j["original"] = record.original;
    j["replacement"] = record.replacement;
    j["strategy"] = to_string(record.strategy);
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("failed writing audit log");
}

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    std::string_view piece = trim(text.substr(start, end - start));
    if (!piece.empty()) sentences.emplace_back(piece);
  };
  while (i < text.size()) {
    if (is_terminator(text[i])) {
      std::size_t j = i;
      while (j + 1 < text.size() && is_terminator(text[j + 1])) ++j;
      if (j + 1 == text.size() || is_space(text[j + 1])) {
        emit(j + 1);
        start = j + 1;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  emit(text.size());
  return sentences;
}

std::vector<std::string> tokenize(std::string_view sentence_text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = sentence_text.size();
  while (i < n) {
    while (i < n && is_space(sentence_text[i])) ++i;
    if (i >= n) break;
    std::size_t j = i;
    while (j < n && !is_space(sentence_text[j])) ++j;
    std::string_view chunk = sentence_text.substr(i, j - i);
    i = j;

    // Peel edge punctuation one character at a time, but never into a
    // placeholder: "[GEO]." must come apart as "[GEO]" and ".".
    std::size_t begin = 0;
    std::size_t end = chunk.size();
    std::vector<std::string> trailing;
    bool atomic = false;
    while (begin < end) {
      std::string_view core = chunk.substr(begin, end - begin);
      if (is_placeholder_chunk(core)) {
        tokens.emplace_back(core);
        atomic = true;
        break;
      }
      if (is_ascii_punct(core.front()) && !opens_placeholder(core)) {
        tokens.emplace_back(1, core.front());
        ++begin;
        continue;
      }
      if (is_ascii_punct(core.back()) && !closes_placeholder(core)) {
        trailing.emplace_back(1, core.back());
        --end;
        continue;
      }
      break;
    }
    if (!atomic && end > begin) {
      tokens.emplace_back(chunk.substr(begin, end - begin));
    }
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens) {
  // a trailing run of pure-terminator tokens glues to what precedes it
  std::size_t attach = tokens.size();
  while (attach > 0 && is_terminator_token(tokens[attach - 1])) --attach;

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && i < attach) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace textanon
