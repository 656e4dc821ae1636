#include "textanon/features.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "textanon/errors.hpp"
#include "textanon/textutil.hpp"

namespace textanon {

namespace {

bool ascii_upper(std::string_view unit) {
  return unit.size() == 1 && unit[0] >= 'A' && unit[0] <= 'Z';
}

bool ascii_lower(std::string_view unit) {
  return unit.size() == 1 && unit[0] >= 'a' && unit[0] <= 'z';
}

bool ascii_digit(std::string_view unit) {
  return unit.size() == 1 && unit[0] >= '0' && unit[0] <= '9';
}

void check_lengths(const std::vector<int>& lengths, const char* what) {
  for (int k : lengths) {
    if (k < 1) {
      throw ConfigError(std::string(what) +
                        " lengths must be >= 1, got " + std::to_string(k));
    }
  }
}

}  // namespace

void FeatureTemplateConfig::validate() const {
  if (window < 0) {
    throw ConfigError("window must be >= 0, got " + std::to_string(window));
  }
  if (pos_window < 0) {
    throw ConfigError("pos_window must be >= 0, got " +
                      std::to_string(pos_window));
  }
  check_lengths(prefix_lengths, "prefix");
  check_lengths(suffix_lengths, "suffix");
  if (min_count < 1) {
    throw ConfigError("min_count must be >= 1, got " +
                      std::to_string(min_count));
  }
}

std::string FeatureTemplateConfig::fingerprint() const {
  std::ostringstream out;
  out << "w" << window << ";pw" << pos_window << ";pre";
  for (int k : prefix_lengths) out << k << ",";
  out << ";suf";
  for (int k : suffix_lengths) out << k << ",";
  out << ";pos" << (use_pos ? 1 : 0) << ";shape" << (use_shape ? 1 : 0)
      << ";min" << min_count;
  return out.str();
}

FeatureIndex::FeatureIndex() : FeatureIndex({}, TagSchema{}, "") {}

FeatureIndex::FeatureIndex(std::vector<std::string> names, TagSchema schema,
                           std::string config_fingerprint)
    : names_(std::move(names)),
      schema_(std::move(schema)),
      fingerprint_(std::move(config_fingerprint)) {
  lookup_.reserve(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(names_[i], i).second) {
      throw DataError("duplicate feature name '" + names_[i] + "'");
    }
  }
}

std::optional<std::uint32_t> FeatureIndex::find(const std::string& name) const {
  auto it = lookup_.find(name);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::string word_shape(std::string_view word) {
  std::string shape;
  char prev = 0;
  std::size_t run = 0;
  auto flush = [&]() {
    if (run == 0) return;
    shape.push_back(prev);
    if (run > 1) shape.push_back('+');
  };
  for (std::string_view unit : utf8_units(word)) {
    char cls;
    if (ascii_upper(unit)) cls = 'X';
    else if (ascii_lower(unit)) cls = 'x';
    else if (ascii_digit(unit)) cls = 'd';
    else cls = '.';
    if (cls == prev) {
      ++run;
    } else {
      flush();
      prev = cls;
      run = 1;
    }
  }
  flush();
  return shape;
}

std::vector<std::string> extract_features(
    const Sentence& sentence, std::size_t position,
    const FeatureTemplateConfig& config) {
  const auto& tokens = sentence.tokens;
  if (position >= tokens.size()) {
    throw DataError("feature position " + std::to_string(position) +
                    " out of range for sentence of length " +
                    std::to_string(tokens.size()));
  }
  std::vector<std::string> out;
  out.reserve(2 * config.window + config.prefix_lengths.size() +
              config.suffix_lengths.size() + 2 * config.pos_window + 6);

  auto offset_name = [](const char* base, int off) {
    return std::string(base) + "[" + std::to_string(off) + "]=";
  };

  for (int off = -config.window; off <= config.window; ++off) {
    long p = static_cast<long>(position) + off;
    std::string value;
    if (p < 0) value = "BOS";
    else if (p >= static_cast<long>(tokens.size())) value = "EOS";
    else value = lower_ascii(tokens[static_cast<std::size_t>(p)].word);
    out.push_back(offset_name("w", off) + value);
  }

  const std::string& focus = tokens[position].word;
  const std::string lower = lower_ascii(focus);
  const std::size_t units = utf8_length(lower);
  for (int k : config.prefix_lengths) {
    if (static_cast<std::size_t>(k) > units) continue;
    out.push_back("pre" + std::to_string(k) + "=" +
                  utf8_prefix(lower, static_cast<std::size_t>(k)));
  }
  for (int k : config.suffix_lengths) {
    if (static_cast<std::size_t>(k) > units) continue;
    out.push_back("suf" + std::to_string(k) + "=" +
                  utf8_suffix(lower, static_cast<std::size_t>(k)));
  }

  if (config.use_shape) out.push_back("shape=" + word_shape(focus));

  auto focus_units = utf8_units(focus);
  bool cap = !focus_units.empty() && ascii_upper(focus_units.front());
  bool allcaps = !focus_units.empty();
  bool digit = !focus_units.empty();
  for (std::string_view unit : focus_units) {
    if (!ascii_upper(unit)) allcaps = false;
    if (!ascii_digit(unit)) digit = false;
  }
  if (cap) out.push_back("cap=1");
  if (allcaps) out.push_back("allcaps=1");
  if (digit) out.push_back("digit=1");

  if (config.use_pos) {
    for (int off = -config.pos_window; off <= config.pos_window; ++off) {
      long p = static_cast<long>(position) + off;
      if (p < 0 || p >= static_cast<long>(tokens.size())) continue;
      const auto& pos = tokens[static_cast<std::size_t>(p)].pos;
      if (!pos) continue;
      out.push_back(offset_name("pos", off) + *pos);
    }
  }

  return out;
}

FeatureIndex build_feature_index(const Corpus& corpus,
                                 const FeatureTemplateConfig& config) {
  config.validate();
  if (corpus.sentences.empty()) {
    throw DataError("cannot build a feature index from an empty corpus");
  }
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      for (auto& name : extract_features(sentence, t, config)) {
        ++counts[std::move(name)];
      }
    }
  }
  std::vector<std::string> names;
  names.reserve(counts.size());
  for (auto& [name, count] : counts) {
    if (count >= static_cast<std::size_t>(config.min_count)) {
      names.push_back(name);
    }
  }
  if (names.empty()) {
    throw DataError("no features survived min_count pruning");
  }
  std::sort(names.begin(), names.end());
  return FeatureIndex(std::move(names), corpus.schema, config.fingerprint());
}

EncodedSentence encode_sentence(const Sentence& sentence,
                                const FeatureIndex& index,
                                const FeatureTemplateConfig& config,
                                GoldLabels gold) {
  if (config.fingerprint() != index.config_fingerprint()) {
    throw ConfigError(
        "feature template config does not match the one the index was built "
        "with");
  }
  if (sentence.tokens.empty()) {
    throw DataError("cannot encode an empty sentence");
  }
  EncodedSentence enc;
  enc.length = sentence.tokens.size();
  enc.active.resize(enc.length);
  for (std::size_t t = 0; t < enc.length; ++t) {
    auto& ids = enc.active[t];
    for (const auto& name : extract_features(sentence, t, config)) {
      if (auto id = index.find(name)) ids.push_back(*id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  if (gold == GoldLabels::attach) {
    std::vector<std::uint32_t> labels;
    labels.reserve(enc.length);
    for (const auto& token : sentence.tokens) {
      labels.push_back(index.schema().index_of(token.tag));
    }
    enc.gold = std::move(labels);
  }
  return enc;
}

}  // namespace textanon
