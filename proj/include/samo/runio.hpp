#pragma once

#include <string>

#include <json.hpp>

#include "samo/common.hpp"
#include "samo/optimizer.hpp"

namespace samo::runio {

// include_timing = false drops the wall-clock fields, leaving the
// bitwise-reproducible payload.
nlohmann::json record_to_json(const RunRecord& record,
                              bool include_timing = true);
RunRecord record_from_json(const nlohmann::json& j);

void write_record(const std::string& path, const RunRecord& record);
RunRecord read_record(const std::string& path);

// iteration,n,hv,igd_plus,wall_seconds with '.' decimals, newline-terminated.
void write_metrics_csv(const std::string& path, const RunRecord& record);

// One point per row, no header, %.17g round-trip formatting.
void write_matrix_csv(const std::string& path, const Mat& points);
Mat read_matrix_csv(const std::string& path);

std::string format_double(double v);

}  // namespace samo::runio
