#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "textanon/corpus.hpp"
#include "textanon/crf.hpp"
#include "textanon/features.hpp"
#include "textanon/metrics.hpp"

namespace textanon {

enum class ExitStatus : int {
  ok = 0,
  usage_error = 1,    // bad flags or configuration
  data_error = 2,     // malformed corpus/model/lexicon, missing files
  numeric_error = 3,  // diverged training
};

// Everything the subcommands read, overridable from a JSON config file and
// then from command-line flags.
struct RunConfig {
  CorpusFormat corpus;
  FeatureTemplateConfig features;
  TrainConfig train;

  std::string strategy = "removal";
  std::string mask = "*";
  std::string lexicon_path;

  std::string eval_mode = "token";  // "token" or "span"
  bool include_o = false;

  SplitRatios ratios;
  std::uint64_t split_seed = 42;

  int verbosity = 1;  // 0 quiet, 1 normal, 2 chatty

  // ConfigError on unknown keys or ill-typed values; DataError if the file
  // cannot be read or is not JSON.
  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_json_text(const std::string& text);
};

// Each command maps exceptions to an ExitStatus and writes diagnostics to
// stderr, so both the CLI and in-process tests observe identical behavior.

ExitStatus cmd_train(const RunConfig& config,
                     const std::filesystem::path& corpus_path,
                     const std::filesystem::path& model_path);

ExitStatus cmd_tag(const RunConfig& config,
                   const std::filesystem::path& model_path,
                   const std::filesystem::path& input_path,
                   const std::filesystem::path& output_path);

ExitStatus cmd_anonymize(const RunConfig& config,
                         const std::filesystem::path& model_path,
                         const std::filesystem::path& input_path,
                         const std::filesystem::path& output_path,
                         const std::optional<std::filesystem::path>&
                             audit_path = std::nullopt);

ExitStatus cmd_evaluate(const RunConfig& config,
                        const std::filesystem::path& gold_path,
                        const std::filesystem::path& pred_path,
                        const std::optional<std::filesystem::path>&
                            report_path = std::nullopt);

ExitStatus cmd_split(const RunConfig& config,
                     const std::filesystem::path& corpus_path,
                     const std::string& output_prefix);

}  // namespace textanon
