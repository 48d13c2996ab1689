#pragma once

#include <filesystem>
#include <string>

#include "mvs/eval.hpp"

namespace mvs {

// CSV renderings of an EvalReport. Every number is printed with six decimal
// places. When the report was produced without timing, the
// mean_query_seconds column holds "NA".

/// strategy,mode,mAP,mean_query_seconds
std::string map_csv(const EvalReport& report);
/// k,mean_interpolated_precision
std::string curve_csv(const StrategySummary& summary);
/// query_id,strategy,AveP
std::string per_query_csv(const EvalReport& report);

/// Writes map.csv, curve_<strategy>.csv and per_query.csv into dir,
/// creating it if needed.
void write_report(const EvalReport& report, const std::filesystem::path& dir);

std::string format_fixed6(double value);

}  // namespace mvs
