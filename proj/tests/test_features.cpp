#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "textanon/errors.hpp"
#include "textanon/features.hpp"

using namespace textanon;

TEST_CASE("word shapes collapse character-class runs") {
  CHECK(word_shape("London") == "Xx+");
  CHECK(word_shape("USA") == "X+");
  CHECK(word_shape("A") == "X");
  CHECK(word_shape("hello") == "x+");
  CHECK(word_shape("3.5") == "d.d");
  CHECK(word_shape("42") == "d+");
  CHECK(word_shape("iPhone7") == "xXx+d");
  CHECK(word_shape("O'Neil") == "X.Xx+");
  CHECK(word_shape("--") == ".+");
  CHECK(word_shape("") == "");
}

TEST_CASE("the demonstration token expands to the documented features") {
  Sentence s = testsupport::sample_sentence();
  FeatureTemplateConfig config;

  auto features = extract_features(s, 6, config);  // London
  std::vector<std::string> expected = {
      "w[-2]=marched", "w[-1]=through", "w[0]=london", "w[1]=to",
      "w[2]=protest",  "pre1=l",        "pre2=lo",     "pre3=lon",
      "suf1=n",        "suf2=on",       "suf3=don",    "shape=Xx+",
      "cap=1",         "pos[-1]=IN",    "pos[0]=NNP",  "pos[1]=TO",
  };
  CHECK(features == expected);
}

TEST_CASE("context outside the sentence becomes sentinels") {
  Sentence s = testsupport::sample_sentence();
  FeatureTemplateConfig config;

  auto first = extract_features(s, 0, config);
  CHECK(std::count(first.begin(), first.end(), "w[-2]=BOS") == 1);
  CHECK(std::count(first.begin(), first.end(), "w[-1]=BOS") == 1);

  auto last = extract_features(s, s.tokens.size() - 1, config);
  CHECK(std::count(last.begin(), last.end(), "w[1]=EOS") == 1);
  CHECK(std::count(last.begin(), last.end(), "w[2]=EOS") == 1);
}

TEST_CASE("affix templates longer than the word are skipped") {
  Sentence s;
  s.tokens = {Token{"to", "TO", "O"}};
  FeatureTemplateConfig config;
  config.window = 0;
  config.use_pos = false;

  auto features = extract_features(s, 0, config);
  std::vector<std::string> expected = {"w[0]=to", "pre1=t", "pre2=to",
                                       "suf1=o",  "suf2=to", "shape=x+"};
  CHECK(features == expected);
}

TEST_CASE("affix lengths count codepoints, not bytes") {
  Sentence s;
  s.tokens = {Token{"Zürich", std::nullopt, "O"}};
  FeatureTemplateConfig config;
  config.window = 0;
  config.use_pos = false;
  config.use_shape = false;

  auto features = extract_features(s, 0, config);
  CHECK(std::count(features.begin(), features.end(), "pre2=zü") == 1);
  CHECK(std::count(features.begin(), features.end(), "suf3=ich") == 1);

  Sentence one;
  one.tokens = {Token{"ü", std::nullopt, "O"}};
  auto single = extract_features(one, 0, config);
  CHECK(std::count(single.begin(), single.end(), "pre1=ü") == 1);
  for (const auto& f : single) CHECK(f.substr(0, 4) != "pre2");
}

TEST_CASE("boolean templates fire only when true") {
  Sentence s;
  s.tokens = {Token{"the", "DT", "O"}, Token{"USA", "NNP", "B-geo"},
              Token{"42", "CD", "O"}, Token{"3.5", "CD", "O"}};
  FeatureTemplateConfig config;
  config.window = 0;
  config.use_pos = false;
  config.use_shape = false;

  auto has = [&](std::size_t t, const std::string& name) {
    auto features = extract_features(s, t, config);
    return std::count(features.begin(), features.end(), name) == 1;
  };
  CHECK_FALSE(has(0, "cap=1"));
  CHECK(has(1, "cap=1"));
  CHECK(has(1, "allcaps=1"));
  CHECK_FALSE(has(1, "digit=1"));
  CHECK(has(2, "digit=1"));
  CHECK_FALSE(has(3, "digit=1"));  // '.' is not a digit
}

TEST_CASE("POS templates honour their own window and missing tags") {
  Sentence s;
  s.tokens = {Token{"a", "DT", "O"}, Token{"b", std::nullopt, "O"},
              Token{"c", "NN", "O"}};
  FeatureTemplateConfig config;
  config.window = 0;
  config.pos_window = 1;
  config.prefix_lengths = {};
  config.suffix_lengths = {};
  config.use_shape = false;

  auto mid = extract_features(s, 1, config);
  CHECK(mid == std::vector<std::string>{"w[0]=b", "pos[-1]=DT", "pos[1]=NN"});

  config.use_pos = false;
  CHECK(extract_features(s, 1, config) ==
        std::vector<std::string>{"w[0]=b"});
}

TEST_CASE("a one-word corpus indexes exactly its feature strings") {
  Corpus corpus;
  Sentence s;
  s.id = "Sentence 1";
  s.tokens = {Token{"Hi", std::nullopt, "O"}};
  corpus.sentences.push_back(s);
  corpus.schema = TagSchema({"O"});

  FeatureTemplateConfig config;
  config.window = 0;
  config.prefix_lengths = {1, 2};
  config.suffix_lengths = {1, 2};
  config.use_pos = false;

  FeatureIndex index = build_feature_index(corpus, config);
  CHECK(index.feature_count() == 7);
  CHECK(index.label_count() == 1);
  std::vector<std::string> expected = {"cap=1",   "pre1=h",  "pre2=hi",
                                       "shape=Xx", "suf1=i", "suf2=hi",
                                       "w[0]=hi"};
  CHECK(index.names() == expected);  // sorted by name
  CHECK(index.find("w[0]=hi").has_value());
  CHECK_FALSE(index.find("w[0]=bye").has_value());
}

TEST_CASE("min_count prunes rare features") {
  Corpus corpus;
  for (int i = 0; i < 3; ++i) {
    Sentence s;
    s.id = "Sentence " + std::to_string(i + 1);
    s.tokens = {Token{"common", std::nullopt, "O"}};
    corpus.sentences.push_back(s);
  }
  Sentence rare;
  rare.id = "Sentence 4";
  rare.tokens = {Token{"rare", std::nullopt, "O"}};
  corpus.sentences.push_back(rare);
  corpus.schema = TagSchema({"O"});

  FeatureTemplateConfig config;
  config.window = 0;
  config.prefix_lengths = {};
  config.suffix_lengths = {};
  config.use_shape = false;
  config.use_pos = false;
  config.min_count = 2;

  FeatureIndex index = build_feature_index(corpus, config);
  CHECK(index.names() == std::vector<std::string>{"w[0]=common"});

  config.min_count = 5;
  CHECK_THROWS_AS(build_feature_index(corpus, config), DataError);
}

TEST_CASE("an empty corpus cannot be indexed") {
  Corpus corpus;
  CHECK_THROWS_AS(build_feature_index(corpus, FeatureTemplateConfig{}),
                  DataError);
}

TEST_CASE("config validation rejects nonsense") {
  FeatureTemplateConfig config;
  config.window = -1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.pos_window = -2;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.min_count = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = {};
  config.prefix_lengths = {0};
  CHECK_THROWS_AS(config.validate(), ConfigError);
  CHECK_NOTHROW(FeatureTemplateConfig{}.validate());
}

TEST_CASE("fingerprints identify the template configuration") {
  FeatureTemplateConfig a;
  FeatureTemplateConfig b;
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() == "w2;pw1;pre1,2,3,;suf1,2,3,;pos1;shape1;min1");

  b.window = 3;
  CHECK(a.fingerprint() != b.fingerprint());
  b = {};
  b.use_shape = false;
  CHECK(a.fingerprint() != b.fingerprint());
  b = {};
  b.suffix_lengths = {1, 2};
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("encoding produces sorted unique ids and optional gold") {
  Corpus corpus;
  corpus.sentences.push_back(testsupport::sample_sentence());
  corpus.schema = TagSchema({"B-geo", "O"});
  FeatureTemplateConfig config;
  FeatureIndex index = build_feature_index(corpus, config);

  EncodedSentence encoded = encode_sentence(corpus.sentences[0], index,
                                            config, GoldLabels::attach);
  CHECK(encoded.length == 13);
  REQUIRE(encoded.active.size() == 13);
  for (const auto& ids : encoded.active) {
    CHECK(std::is_sorted(ids.begin(), ids.end()));
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    for (auto id : ids) CHECK(id < index.feature_count());
  }
  REQUIRE(encoded.gold.has_value());
  CHECK(encoded.gold->size() == 13);
  CHECK((*encoded.gold)[6] == corpus.schema.index_of("B-geo"));
  CHECK((*encoded.gold)[0] == corpus.schema.index_of("O"));

  EncodedSentence plain =
      encode_sentence(corpus.sentences[0], index, config);
  CHECK_FALSE(plain.gold.has_value());
}

TEST_CASE("encoding drops unindexed features silently") {
  Corpus corpus;
  Sentence s;
  s.id = "Sentence 1";
  s.tokens = {Token{"seen", std::nullopt, "O"}};
  corpus.sentences.push_back(s);
  corpus.schema = TagSchema({"O"});

  FeatureTemplateConfig config;
  config.window = 0;
  config.prefix_lengths = {};
  config.suffix_lengths = {};
  config.use_shape = false;
  config.use_pos = false;
  FeatureIndex index = build_feature_index(corpus, config);

  Sentence unseen;
  unseen.id = "Sentence 2";
  unseen.tokens = {Token{"novel", std::nullopt, "O"}};
  EncodedSentence encoded = encode_sentence(unseen, index, config);
  CHECK(encoded.active[0].empty());
}

TEST_CASE("encoding checks fingerprint and schema membership") {
  Corpus corpus;
  corpus.sentences.push_back(testsupport::sample_sentence());
  corpus.schema = TagSchema({"B-geo", "O"});
  FeatureTemplateConfig config;
  FeatureIndex index = build_feature_index(corpus, config);

  FeatureTemplateConfig other;
  other.window = 1;
  CHECK_THROWS_AS(
      encode_sentence(corpus.sentences[0], index, other, GoldLabels::attach),
      ConfigError);

  Sentence bad = corpus.sentences[0];
  bad.tokens[0].tag = "B-org";
  CHECK_THROWS_AS(encode_sentence(bad, index, config, GoldLabels::attach),
                  DataError);
  CHECK_NOTHROW(encode_sentence(bad, index, config, GoldLabels::omit));
}

TEST_CASE("index construction is deterministic") {
  Corpus corpus;
  corpus.sentences.push_back(testsupport::sample_sentence());
  corpus.schema = TagSchema({"B-geo", "O"});
  FeatureTemplateConfig config;
  FeatureIndex a = build_feature_index(corpus, config);
  FeatureIndex b = build_feature_index(corpus, config);
  CHECK(a.names() == b.names());
  CHECK(a.config_fingerprint() == b.config_fingerprint());
}
