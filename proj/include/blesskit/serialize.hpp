#pragma once

#include <json.hpp>
#include <string>

#include "blesskit/bless.hpp"
#include "blesskit/config.hpp"
#include "blesskit/falkon.hpp"

namespace blesskit {

/// Every document uses insertion-ordered objects so the serialized field
/// order is fixed.
using Json = nlohmann::ordered_json;

Json to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const Json& j);

Json to_json(const Schedule& schedule);
Json to_json(const Dictionary& dict);
Dictionary dictionary_from_json(const Json& j);

/// `include_timings` = false drops wall-clock fields so that two runs with
/// the same inputs produce identical documents.
Json to_json(const LevelDiagnostics& diag, bool include_timings);
Json to_json(const DictionaryPath& path, bool include_timings);

/// Snapshots are not serialized.
Json to_json(const FalkonModel& model);
FalkonModel model_from_json(const Json& j);

Json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys throw InvalidArgument so
/// that typos in config files do not pass silently.
ExperimentConfig config_from_json(const Json& j);

/// Reads a whole JSON file. IoError when unreadable, FormatError when
/// malformed.
Json read_json_file(const std::string& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const Json& j, const std::string& path);

}  // namespace blesskit
