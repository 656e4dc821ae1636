#include "textanon/model_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "textanon/errors.hpp"

namespace textanon {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_finite(const std::vector<double>& weights, const char* block) {
  for (double w : weights) {
    if (!std::isfinite(w)) {
      throw DataError(std::string("model file holds a non-finite ") + block +
                      " weight");
    }
  }
}

std::vector<double> read_weights(const nlohmann::json& node, const char* key,
                                 std::size_t expected) {
  if (!node.contains(key) || !node[key].is_array()) {
    throw DataError(std::string("model file is missing the '") + key +
                    "' array");
  }
  std::vector<double> out;
  out.reserve(node[key].size());
  for (const auto& v : node[key]) {
    if (!v.is_number()) {
      throw DataError(std::string("non-numeric entry in '") + key + "'");
    }
    out.push_back(v.get<double>());
  }
  if (out.size() != expected) {
    throw DataError(std::string("'") + key + "' has " +
                    std::to_string(out.size()) + " entries, expected " +
                    std::to_string(expected));
  }
  return out;
}

}  // namespace

void save_model(const CrfModel& model, std::ostream& out) {
  model.check_shapes();
  ordered_json j;
  j["format"] = "textanon-crf-model";
  j["format_version"] = kModelFormatVersion;
  j["config"] = {
      {"window", model.config.window},
      {"pos_window", model.config.pos_window},
      {"prefix_lengths", model.config.prefix_lengths},
      {"suffix_lengths", model.config.suffix_lengths},
      {"use_pos", model.config.use_pos},
      {"use_shape", model.config.use_shape},
      {"min_count", model.config.min_count},
  };
  j["config_fingerprint"] = model.index.config_fingerprint();
  j["labels"] = model.index.schema().labels();
  j["feature_names"] = model.index.names();
  j["unary_weights"] = model.unary_weights;
  j["transition_weights"] = model.transition_weights;
  j["metadata"] = {
      {"epochs_run", model.metadata.epochs_run},
      {"final_objective", model.metadata.final_objective},
      {"epoch_objectives", model.metadata.epoch_objectives},
  };
  out << j.dump(1, '\t') << '\n';
  if (!out) throw DataError("failed writing model stream");
}

void save_model_file(const CrfModel& model,
                     const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot open model file for writing: " + path.string());
    }
    try {
      save_model(model, out);
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("failed writing model file: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move model into place at " + path.string());
  }
}

CrfModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("model file is not a JSON object");
  if (!j.contains("format_version") ||
      !j["format_version"].is_number_integer()) {
    throw DataError("model file is missing 'format_version'");
  }
  const int version = j["format_version"].get<int>();
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " +
                    std::to_string(version) + " (this build reads version " +
                    std::to_string(kModelFormatVersion) + ")");
  }

  FeatureTemplateConfig config;
  try {
    const auto& c = j.at("config");
    config.window = c.at("window").get<int>();
    config.pos_window = c.at("pos_window").get<int>();
    config.prefix_lengths = c.at("prefix_lengths").get<std::vector<int>>();
    config.suffix_lengths = c.at("suffix_lengths").get<std::vector<int>>();
    config.use_pos = c.at("use_pos").get<bool>();
    config.use_shape = c.at("use_shape").get<bool>();
    config.min_count = c.at("min_count").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file has a malformed 'config': ") +
                    e.what());
  }

  std::vector<std::string> labels;
  std::vector<std::string> names;
  std::string fingerprint;
  TrainMetadata metadata;
  try {
    labels = j.at("labels").get<std::vector<std::string>>();
    names = j.at("feature_names").get<std::vector<std::string>>();
    fingerprint = j.at("config_fingerprint").get<std::string>();
    if (j.contains("metadata")) {
      const auto& m = j["metadata"];
      metadata.epochs_run = m.value("epochs_run", 0);
      metadata.final_objective = m.value("final_objective", 0.0);
      metadata.epoch_objectives =
          m.value("epoch_objectives", std::vector<double>{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is malformed: ") + e.what());
  }

  if (fingerprint != config.fingerprint()) {
    throw DataError(
        "model file fingerprint does not match its stored config");
  }

  TagSchema schema{labels};
  if (schema.labels() != labels) {
    throw DataError("model file labels are not a sorted tag schema");
  }
  CrfModel model;
  model.index = FeatureIndex(std::move(names), std::move(schema),
                             std::move(fingerprint));
  model.config = config;
  const std::size_t U = model.index.feature_count();
  const std::size_t L = model.index.label_count();
  model.unary_weights = read_weights(j, "unary_weights", U * L);
  model.transition_weights = read_weights(j, "transition_weights", L * L);
  model.metadata = std::move(metadata);
  check_finite(model.unary_weights, "unary");
  check_finite(model.transition_weights, "transition");
  model.check_shapes();
  return model;
}

CrfModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path.string());
  return load_model(in);
}

}  // namespace textanon
