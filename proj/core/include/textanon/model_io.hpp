#pragma once

#include <filesystem>
#include <iosfwd>

#include "textanon/crf.hpp"

namespace textanon {

inline constexpr int kModelFormatVersion = 1;

// JSON with sorted keys and round-trippable doubles: two saves of the same
// model are byte-identical.
void save_model(const CrfModel& model, std::ostream& out);

// Writes to a sibling temp file and renames into place, so a failed run
// never leaves a truncated model behind.
void save_model_file(const CrfModel& model, const std::filesystem::path& path);

// DataError on malformed JSON, an unsupported format version, shape
// mismatches, or non-finite weights.
CrfModel load_model(std::istream& in);
CrfModel load_model_file(const std::filesystem::path& path);

}  // namespace textanon
