#pragma once

#include <string>

#include <json.hpp>

#include "cjssrr/diagnostics.hpp"
#include "cjssrr/pipeline.hpp"

namespace cjssrr {

/// Version of the report layout described by schema/report.schema.json.
inline constexpr const char* kReportSchemaVersion = "1.0.0";

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
nlohmann::ordered_json count_to_json(const CountEstimate& est);
nlohmann::ordered_json solve_to_json(const SolveOutcome& out, const RunConfig& cfg);
nlohmann::ordered_json baseline_to_json(const BaselineOutcome& out, const RunConfig& cfg);
nlohmann::ordered_json bench_to_json(const BenchOutcome& out, const RunConfig& cfg);

}  // namespace cjssrr
