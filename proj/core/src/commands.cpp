#include "textanon/commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "textanon/anonymizer.hpp"
#include "textanon/errors.hpp"
#include "textanon/model_io.hpp"

namespace textanon {

namespace {

ExitStatus guarded(const std::function<void()>& body) {
  try {
    body();
    return ExitStatus::ok;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitStatus::usage_error;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitStatus::numeric_error;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitStatus::data_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitStatus::data_error;
  }
}

void note(const RunConfig& config, const std::string& message) {
  if (config.verbosity >= 1) std::cerr << message << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DataError("failed reading input file: " + path.string());
  return buffer.str();
}

// All derived outputs use temp-and-rename, mirroring model files.
void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot open output file for writing: " +
                      path.string());
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("failed writing output file: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move output into place at " + path.string());
  }
}

void check_distinct(const std::filesystem::path& output,
                    std::initializer_list<std::filesystem::path> inputs) {
  std::error_code ec;
  auto canonical_out = std::filesystem::weakly_canonical(output, ec);
  if (ec) canonical_out = output;
  for (const auto& input : inputs) {
    auto canonical_in = std::filesystem::weakly_canonical(input, ec);
    if (ec) canonical_in = input;
    if (canonical_out == canonical_in) {
      throw ConfigError("output path '" + output.string() +
                        "' equals an input path");
    }
  }
}

char parse_delimiter(const nlohmann::json& value) {
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "comma" || s == ",") return ',';
    if (s == "tab" || s == "\t" || s == "\\t") return '\t';
    if (s.size() == 1) return s[0];
  }
  throw ConfigError("corpus.delimiter must be 'comma', 'tab' or one "
                    "character");
}

template <typename T>
T typed(const nlohmann::json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + where + "' has the wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("config must be a JSON object");

  RunConfig config;
  for (const auto& [section, body] : j.items()) {
    if (section != "verbosity" && !body.is_object()) {
      throw ConfigError("config section '" + section +
                        "' must be a JSON object");
    }
    if (section == "corpus") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "delimiter") config.corpus.delimiter = parse_delimiter(value);
        else if (key == "marker_column") config.corpus.marker_column = typed<std::string>(value, where);
        else if (key == "word_column") config.corpus.word_column = typed<std::string>(value, where);
        else if (key == "pos_column") config.corpus.pos_column = typed<std::string>(value, where);
        else if (key == "tag_column") config.corpus.tag_column = typed<std::string>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "features") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "window") config.features.window = typed<int>(value, where);
        else if (key == "pos_window") config.features.pos_window = typed<int>(value, where);
        else if (key == "prefix_lengths") config.features.prefix_lengths = typed<std::vector<int>>(value, where);
        else if (key == "suffix_lengths") config.features.suffix_lengths = typed<std::vector<int>>(value, where);
        else if (key == "use_pos") config.features.use_pos = typed<bool>(value, where);
        else if (key == "use_shape") config.features.use_shape = typed<bool>(value, where);
        else if (key == "min_count") config.features.min_count = typed<int>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "train") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "l2") config.train.l2 = typed<double>(value, where);
        else if (key == "epochs") config.train.epochs = typed<int>(value, where);
        else if (key == "learning_rate") config.train.learning_rate = typed<double>(value, where);
        else if (key == "batch_size") config.train.batch_size = typed<int>(value, where);
        else if (key == "tolerance") config.train.tolerance = typed<double>(value, where);
        else if (key == "seed") config.train.seed = typed<std::uint64_t>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "anonymize") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "strategy") config.strategy = typed<std::string>(value, where);
        else if (key == "mask") config.mask = typed<std::string>(value, where);
        else if (key == "lexicon") config.lexicon_path = typed<std::string>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "evaluate") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "mode") config.eval_mode = typed<std::string>(value, where);
        else if (key == "include_o") config.include_o = typed<bool>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "split") {
      for (const auto& [key, value] : body.items()) {
        const std::string where = section + "." + key;
        if (key == "train") config.ratios.train = typed<double>(value, where);
        else if (key == "dev") config.ratios.dev = typed<double>(value, where);
        else if (key == "test") config.ratios.test = typed<double>(value, where);
        else if (key == "seed") config.split_seed = typed<std::uint64_t>(value, where);
        else throw ConfigError("unknown config key '" + where + "'");
      }
    } else if (section == "verbosity") {
      config.verbosity = typed<int>(j["verbosity"], "verbosity");
    } else {
      throw ConfigError("unknown config section '" + section + "'");
    }
  }
  return config;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  return from_json_text(read_text_file(path));
}

ExitStatus cmd_train(const RunConfig& config,
                     const std::filesystem::path& corpus_path,
                     const std::filesystem::path& model_path) {
  return guarded([&] {
    check_distinct(model_path, {corpus_path});
    config.features.validate();
    config.train.validate();
    auto [corpus, report] = parse_corpus_file(corpus_path.string(),
                                              config.corpus);
    note(config, "parsed " + std::to_string(report.sentences) +
                     " sentences (" + std::to_string(report.rows) +
                     " tokens, " +
                     std::to_string(corpus.schema.size()) + " tags)");
    FeatureIndex index = build_feature_index(corpus, config.features);
    note(config, "indexed " + std::to_string(index.feature_count()) +
                     " observation features");
    std::vector<EncodedSentence> encoded;
    encoded.reserve(corpus.sentences.size());
    for (const auto& sentence : corpus.sentences) {
      encoded.push_back(encode_sentence(sentence, index, config.features,
                                        GoldLabels::attach));
    }
    CrfModel model = train(encoded, index, config.features, config.train);
    save_model_file(model, model_path);
    note(config, "trained for " +
                     std::to_string(model.metadata.epochs_run) +
                     " epochs, final objective " +
                     std::to_string(model.metadata.final_objective) +
                     ", model written to " + model_path.string());
  });
}

ExitStatus cmd_tag(const RunConfig& config,
                   const std::filesystem::path& model_path,
                   const std::filesystem::path& input_path,
                   const std::filesystem::path& output_path) {
  return guarded([&] {
    check_distinct(output_path, {model_path, input_path});
    CrfModel model = load_model_file(model_path);
    auto [corpus, report] = parse_corpus_file(input_path.string(),
                                              config.corpus);
    for (auto& sentence : corpus.sentences) {
      std::vector<std::string> tags = tag_sentence(model, sentence);
      for (std::size_t t = 0; t < tags.size(); ++t) {
        sentence.tokens[t].tag = std::move(tags[t]);
      }
    }
    corpus.schema = model.index.schema();
    std::ostringstream out;
    write_corpus(corpus, out, config.corpus);
    write_text_file(output_path, out.str());
    note(config, "tagged " + std::to_string(report.sentences) +
                     " sentences into " + output_path.string());
  });
}

ExitStatus cmd_anonymize(const RunConfig& config,
                         const std::filesystem::path& model_path,
                         const std::filesystem::path& input_path,
                         const std::filesystem::path& output_path,
                         const std::optional<std::filesystem::path>&
                             audit_path) {
  return guarded([&] {
    check_distinct(output_path, {model_path, input_path});
    if (audit_path) check_distinct(*audit_path, {model_path, input_path});
    Strategy strategy;
    strategy.kind = strategy_kind_from_string(config.strategy);
    strategy.mask = config.mask;
    PseudonymLexicon lexicon;
    if (!config.lexicon_path.empty()) {
      lexicon = PseudonymLexicon::load_file(config.lexicon_path);
      strategy.lexicon = &lexicon;
    }
    CrfModel model = load_model_file(model_path);
    const std::string text = read_text_file(input_path);
    TextAnonymization result = anonymize_raw_text(text, model, strategy);
    write_text_file(output_path, result.text + "\n");
    if (audit_path) {
      std::ostringstream log;
      write_audit_log(result.audits, log);
      write_text_file(*audit_path, log.str());
    }
    note(config, "replaced " + std::to_string(result.audits.size()) +
                     " spans into " + output_path.string());
  });
}

ExitStatus cmd_evaluate(const RunConfig& config,
                        const std::filesystem::path& gold_path,
                        const std::filesystem::path& pred_path,
                        const std::optional<std::filesystem::path>&
                            report_path) {
  return guarded([&] {
    if (report_path) check_distinct(*report_path, {gold_path, pred_path});
    EvalMode mode;
    if (config.eval_mode == "token") mode = EvalMode::token;
    else if (config.eval_mode == "span") mode = EvalMode::span;
    else {
      throw ConfigError("unknown evaluation mode '" + config.eval_mode +
                        "': expected token or span");
    }
    auto gold = parse_corpus_file(gold_path.string(), config.corpus);
    auto pred = parse_corpus_file(pred_path.string(), config.corpus);

    std::map<std::string, Counts> counts;
    if (mode == EvalMode::token) {
      std::vector<std::vector<std::string>> gold_tags, pred_tags;
      for (const auto& sentence : gold.corpus.sentences) {
        auto& tags = gold_tags.emplace_back();
        for (const auto& token : sentence.tokens) tags.push_back(token.tag);
      }
      for (const auto& sentence : pred.corpus.sentences) {
        auto& tags = pred_tags.emplace_back();
        for (const auto& token : sentence.tokens) tags.push_back(token.tag);
      }
      counts = token_counts(gold_tags, pred_tags);
    } else {
      std::vector<std::vector<EntitySpan>> gold_spans, pred_spans;
      for (const auto& sentence : gold.corpus.sentences) {
        gold_spans.push_back(decode_spans(sentence, gold.corpus.schema));
      }
      for (const auto& sentence : pred.corpus.sentences) {
        pred_spans.push_back(decode_spans(sentence, pred.corpus.schema));
      }
      counts = span_counts(gold_spans, pred_spans);
    }
    EvalReport report = weighted_report(counts, mode, config.include_o);
    std::cout << render_table(report);
    if (report_path) {
      nlohmann::ordered_json j;
      j["mode"] = config.eval_mode;
      j["include_o"] = config.include_o;
      nlohmann::ordered_json keys = nlohmann::ordered_json::object();
      for (const auto& [key, scores] : report.per_key) {
        keys[key] = {
            {"tp", scores.counts.tp},       {"fp", scores.counts.fp},
            {"fn", scores.counts.fn},       {"precision", scores.precision},
            {"recall", scores.recall},      {"f1", scores.f1},
            {"support", scores.support},
        };
      }
      j["per_key"] = std::move(keys);
      j["weighted"] = {
          {"precision", report.weighted_precision},
          {"recall", report.weighted_recall},
          {"f1", report.weighted_f1},
          {"support", report.total_support},
      };
      j["flags"] = report.flags;
      write_text_file(*report_path, j.dump(1, '\t') + "\n");
    }
  });
}

ExitStatus cmd_split(const RunConfig& config,
                     const std::filesystem::path& corpus_path,
                     const std::string& output_prefix) {
  return guarded([&] {
    const std::filesystem::path train_path = output_prefix + ".train";
    const std::filesystem::path dev_path = output_prefix + ".dev";
    const std::filesystem::path test_path = output_prefix + ".test";
    for (const auto& path : {train_path, dev_path, test_path}) {
      check_distinct(path, {corpus_path});
    }
    auto [corpus, report] = parse_corpus_file(corpus_path.string(),
                                              config.corpus);
    CorpusSplit split = split_corpus(corpus, config.ratios,
                                     config.split_seed);
    auto emit = [&](const Corpus& part, const std::filesystem::path& path) {
      std::ostringstream out;
      write_corpus(part, out, config.corpus);
      write_text_file(path, out.str());
    };
    emit(split.train, train_path);
    emit(split.dev, dev_path);
    emit(split.test, test_path);
    std::cout << "train " << split.train.sentences.size() << '\n'
              << "dev " << split.dev.sentences.size() << '\n'
              << "test " << split.test.sentences.size() << '\n';
  });
}

}  // namespace textanon
