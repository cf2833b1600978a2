#pragma once

#include "greenshop/generator.hpp"
#include "greenshop/model.hpp"
#include "greenshop/solver.hpp"
#include "greenshop/traces.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace greenshop::io {

using nlohmann::json;

inline constexpr const char *kInstanceSchema = "instance.v1";
inline constexpr const char *kScheduleSchema = "schedule.v1";
inline constexpr const char *kTraceSchema = "trace.v1";
inline constexpr const char *kResultSchema = "result.v1";

// Every *_from_json throws ParseError on a wrong schema tag or malformed field.

json to_json(const Instance &instance);
Instance instance_from_json(const json &j);

json to_json(const Schedule &schedule);
Schedule schedule_from_json(const json &j);

json to_json(const CarbonTrace &trace);
CarbonTrace trace_from_json(const json &j);

/// Same field names as GeneratorConfig. Missing fields keep their defaults.
json to_json(const GeneratorConfig &config);
GeneratorConfig generator_config_from_json(const json &j);

json to_json(const ObjectiveReport &report);
json to_json(const SolveResult &result);
json to_json(const BilevelResult &result);

/// result.v1 document for a makespan-only run.
json result_document(const SolveResult &baseline);
/// result.v1 document for a bi-level run.
json result_document(const BilevelResult &result);

json read_json_file(const std::filesystem::path &path);
/// Writes `j.dump(2)` plus a trailing newline.
void write_json_file(const std::filesystem::path &path, const json &j);

} // namespace greenshop::io
