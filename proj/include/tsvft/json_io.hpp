#pragma once

#include <string>

#include <json.hpp>

#include "tsvft/planner.hpp"
#include "tsvft/relgraph.hpp"
#include "tsvft/structure.hpp"
#include "tsvft/tolerance.hpp"

namespace tsvft {

// File schemas:
//   graph:     {"f_tsvs": [...], "s_tsvs": [...], "edges": [["u","v"], ...]}
//   structure: {"k": int, "paths": {"f1": [["f1","f3","s1"], ...], ...}}
//   instance:  {"pitch_um": 5.0, "f_tsvs": [{"id","x","y","bbox":{...}}],
//               "s_sites": [{"id","x","y"}], "params": {...}}
// Parsers throw ParseError with the JSON position on malformed input.

nlohmann::json graph_to_json(const RelGraph& g);
RelGraph graph_from_json(const nlohmann::json& j);

nlohmann::json structure_to_json(const ToleranceStructure& st);
ToleranceStructure structure_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const PlanInstance& inst);
PlanInstance instance_from_json(const nlohmann::json& j);

nlohmann::json tolerance_report_to_json(const ToleranceReport& report);
nlohmann::json metrics_to_json(const StructureMetrics& ms);
nlohmann::json plan_result_to_json(const PlanResult& result);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a 64 digest of a file's bytes, as "fnv1a64:<hex>".
std::string file_digest(const std::string& path);

// Yields are reported at 6 decimal places.
double round_yield(double y);

}  // namespace tsvft
