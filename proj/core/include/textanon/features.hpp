#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textanon/corpus.hpp"

namespace textanon {

struct FeatureTemplateConfig {
  int window = 2;      // word-identity context radius
  int pos_window = 1;  // POS context radius, active when use_pos
  std::vector<int> prefix_lengths = {1, 2, 3};
  std::vector<int> suffix_lengths = {1, 2, 3};
  bool use_pos = true;
  bool use_shape = true;
  int min_count = 1;

  void validate() const;          // ConfigError on bad values
  std::string fingerprint() const;

  friend bool operator==(const FeatureTemplateConfig&,
                         const FeatureTemplateConfig&) = default;
};

// Immutable bijection between observation feature names and [0, U).
class FeatureIndex {
 public:
  FeatureIndex();
  FeatureIndex(std::vector<std::string> names, TagSchema schema,
               std::string config_fingerprint);

  std::optional<std::uint32_t> find(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }
  std::size_t feature_count() const { return names_.size(); }
  std::size_t label_count() const { return schema_.size(); }
  const TagSchema& schema() const { return schema_; }
  const std::string& config_fingerprint() const { return fingerprint_; }

 private:
  std::vector<std::string> names_;
  TagSchema schema_;
  std::string fingerprint_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
};

// A sentence reduced to the ids the model consumes: per-position active
// observation features (sorted, deduplicated), optionally gold label ids.
struct EncodedSentence {
  std::size_t length = 0;
  std::vector<std::vector<std::uint32_t>> active;
  std::optional<std::vector<std::uint32_t>> gold;
};

// Feature strings for one position, deterministic order. Unknown-word
// contexts outside the sentence yield BOS/EOS sentinels; prefix/suffix
// templates are skipped when the focus word is shorter than the length.
std::vector<std::string> extract_features(const Sentence& sentence,
                                          std::size_t position,
                                          const FeatureTemplateConfig& config);

// Collapsed character-class word shape: X/x/d/. with runs longer than one
// written as the class plus '+' ("London" -> "Xx+").
std::string word_shape(std::string_view word);

// Scans the corpus, keeps features occurring >= min_count times, sorted by
// name. DataError if the corpus is empty or nothing survives pruning.
FeatureIndex build_feature_index(const Corpus& corpus,
                                 const FeatureTemplateConfig& config);

enum class GoldLabels { omit, attach };

// ConfigError if the config fingerprint differs from the index's; DataError
// if gold labels are requested but a tag is outside the schema. Unindexed
// features are silently dropped.
EncodedSentence encode_sentence(const Sentence& sentence,
                                const FeatureIndex& index,
                                const FeatureTemplateConfig& config,
                                GoldLabels gold = GoldLabels::omit);

}  // namespace textanon
