// Command-line front end: train, tag, anonymize, evaluate, split.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textanon/anonymizer.hpp"
#include "textanon/commands.hpp"
#include "textanon/errors.hpp"

namespace {

using textanon::ExitStatus;
using textanon::RunConfig;

char delimiter_from(const std::string& value) {
  if (value == "comma" || value == ",") return ',';
  if (value == "tab" || value == "\t" || value == "\\t") return '\t';
  if (value.size() == 1) return value[0];
  throw textanon::ConfigError(
      "--delimiter must be 'comma', 'tab' or one character");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CRF-based named-entity tagging and text anonymization"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file applied before flags")
      ->expected(1);
  int quiet = 0;
  int verbose = 0;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");
  app.add_flag("-v,--verbose", verbose, "More progress output");

  std::string delimiter;

  // train
  auto* train = app.add_subcommand("train", "Train a tagging model");
  std::string train_corpus, train_model;
  train->add_option("corpus", train_corpus, "Annotated corpus file")
      ->required();
  train->add_option("model", train_model, "Model file to write")->required();
  double l2 = 0, learning_rate = 0, tolerance = 0;
  int epochs = 0, batch_size = 0, min_count = 0, window = 0, pos_window = 0;
  std::uint64_t train_seed = 0;
  bool no_pos = false, no_shape = false;
  std::vector<int> prefix_lengths, suffix_lengths;
  train->add_option("--l2", l2, "L2 regularization strength");
  train->add_option("--epochs", epochs, "Maximum training epochs");
  train->add_option("--learning-rate", learning_rate, "AdaGrad step size");
  train->add_option("--batch-size", batch_size, "Mini-batch size");
  train->add_option("--tolerance", tolerance,
                    "Relative objective change that stops training");
  train->add_option("--seed", train_seed, "Shuffle seed");
  train->add_option("--window", window, "Word context radius");
  train->add_option("--pos-window", pos_window, "POS context radius");
  train->add_option("--prefix-lengths", prefix_lengths,
                    "Prefix template lengths");
  train->add_option("--suffix-lengths", suffix_lengths,
                    "Suffix template lengths");
  train->add_flag("--no-pos", no_pos, "Drop POS templates");
  train->add_flag("--no-shape", no_shape, "Drop the shape template");
  train->add_option("--min-count", min_count,
                    "Minimum occurrences for an indexed feature");
  train->add_option("--delimiter", delimiter, "Corpus delimiter");

  // tag
  auto* tag = app.add_subcommand("tag", "Tag a corpus with a trained model");
  std::string tag_model, tag_input, tag_output;
  tag->add_option("model", tag_model, "Trained model file")->required();
  tag->add_option("input", tag_input, "Corpus file to tag")->required();
  tag->add_option("output", tag_output, "Tagged corpus file to write")
      ->required();
  tag->add_option("--delimiter", delimiter, "Corpus delimiter");

  // anonymize
  auto* anonymize =
      app.add_subcommand("anonymize", "Anonymize raw text with a model");
  std::string anon_model, anon_input, anon_output, strategy, mask, lexicon,
      audit;
  anonymize->add_option("model", anon_model, "Trained model file")
      ->required();
  anonymize->add_option("input", anon_input, "Raw text file")->required();
  anonymize->add_option("output", anon_output, "Anonymized text to write")
      ->required();
  anonymize
      ->add_option("--strategy", strategy,
                   "removal, categorization or pseudonymization")
      ->check(CLI::IsMember(
          {"removal", "categorization", "pseudonymization"}));
  anonymize->add_option("--mask-char", mask,
                        "Mask character for the removal strategy");
  anonymize->add_option("--lexicon", lexicon,
                        "Pseudonym lexicon (JSON) for pseudonymization");
  anonymize->add_option("--audit", audit,
                        "Write a JSON-lines audit log here");

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "Score predictions against gold tags");
  std::string gold_path, pred_path, report_path, mode;
  evaluate->add_option("gold", gold_path, "Gold corpus file")->required();
  evaluate->add_option("pred", pred_path, "Predicted corpus file")
      ->required();
  evaluate->add_option("--mode", mode, "token or span")
      ->check(CLI::IsMember({"token", "span"}));
  bool include_o = false;
  evaluate->add_flag("--include-o", include_o,
                     "Fold the O tag into the weighted averages");
  evaluate->add_option("--report", report_path,
                       "Write a structured JSON report here");
  evaluate->add_option("--delimiter", delimiter, "Corpus delimiter");

  // split
  auto* split =
      app.add_subcommand("split", "Partition a corpus into train/dev/test");
  std::string split_corpus_path, split_prefix;
  std::vector<double> ratios;
  std::uint64_t split_seed = 0;
  split->add_option("corpus", split_corpus_path, "Corpus file to partition")
      ->required();
  split->add_option("prefix", split_prefix, "Output path prefix")
      ->required();
  split->add_option("--ratios", ratios, "Train, dev and test fractions")
      ->expected(3);
  split->add_option("--seed", split_seed, "Shuffle seed");
  split->add_option("--delimiter", delimiter, "Corpus delimiter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitStatus::usage_error);
  }

  RunConfig config;
  if (!config_path.empty()) {
    try {
      config = RunConfig::from_file(config_path);
    } catch (const textanon::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return static_cast<int>(ExitStatus::usage_error);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return static_cast<int>(ExitStatus::data_error);
    }
  }
  if (quiet) config.verbosity = 0;
  if (verbose) config.verbosity = 2;

  try {
    if (!delimiter.empty()) {
      config.corpus.delimiter = delimiter_from(delimiter);
    }
  } catch (const textanon::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitStatus::usage_error);
  }

  ExitStatus status = ExitStatus::ok;
  if (*train) {
    if (train->count("--l2")) config.train.l2 = l2;
    if (train->count("--epochs")) config.train.epochs = epochs;
    if (train->count("--learning-rate")) {
      config.train.learning_rate = learning_rate;
    }
    if (train->count("--batch-size")) config.train.batch_size = batch_size;
    if (train->count("--tolerance")) config.train.tolerance = tolerance;
    if (train->count("--seed")) config.train.seed = train_seed;
    if (train->count("--window")) config.features.window = window;
    if (train->count("--pos-window")) config.features.pos_window = pos_window;
    if (train->count("--prefix-lengths")) {
      config.features.prefix_lengths = prefix_lengths;
    }
    if (train->count("--suffix-lengths")) {
      config.features.suffix_lengths = suffix_lengths;
    }
    if (no_pos) config.features.use_pos = false;
    if (no_shape) config.features.use_shape = false;
    if (train->count("--min-count")) config.features.min_count = min_count;
    status = cmd_train(config, train_corpus, train_model);
  } else if (*tag) {
    status = cmd_tag(config, tag_model, tag_input, tag_output);
  } else if (*anonymize) {
    if (anonymize->count("--strategy")) config.strategy = strategy;
    if (anonymize->count("--mask-char")) config.mask = mask;
    if (anonymize->count("--lexicon")) config.lexicon_path = lexicon;
    std::optional<std::filesystem::path> audit_path;
    if (anonymize->count("--audit")) audit_path = audit;
    status = cmd_anonymize(config, anon_model, anon_input, anon_output,
                           audit_path);
  } else if (*evaluate) {
    if (evaluate->count("--mode")) config.eval_mode = mode;
    if (include_o) config.include_o = true;
    std::optional<std::filesystem::path> report;
    if (evaluate->count("--report")) report = report_path;
    status = cmd_evaluate(config, gold_path, pred_path, report);
  } else if (*split) {
    if (split->count("--ratios")) {
      config.ratios = {ratios[0], ratios[1], ratios[2]};
    }
    if (split->count("--seed")) config.split_seed = split_seed;
    status = cmd_split(config, split_corpus_path, split_prefix);
  }
  return static_cast<int>(status);
}
