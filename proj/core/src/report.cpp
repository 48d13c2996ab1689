#include "mvs/report.hpp"

#include <cstdio>

#include "mvs/formats.hpp"

namespace mvs {

std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string map_csv(const EvalReport& report) {
  std::string out = "strategy,mode,mAP,mean_query_seconds\n";
  for (const auto& s : report.strategies) {
    out += strategy_name(s.strategy);
    out += ',';
    out += ap_mode_name(report.ap_mode);
    out += ',' + format_fixed6(s.mean_average_precision) + ',';
    out += report.timed ? format_fixed6(s.mean_query_seconds) : "NA";
    out += '\n';
  }
  return out;
}

std::string curve_csv(const StrategySummary& summary) {
  std::string out = "k,mean_interpolated_precision\n";
  for (const auto& p : summary.curve) {
    out += std::to_string(p.rank) + ',' + format_fixed6(p.precision) + '\n';
  }
  return out;
}

std::string per_query_csv(const EvalReport& report) {
  std::string out = "query_id,strategy,AveP\n";
  for (const auto& r : report.per_query) {
    out += r.query_id;
    out += ',';
    out += strategy_name(r.strategy);
    out += ',' + format_fixed6(r.average_precision) + '\n';
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "map.csv", map_csv(report));
  for (const auto& s : report.strategies) {
    write_file(dir / ("curve_" + std::string(strategy_name(s.strategy)) + ".csv"),
               curve_csv(s));
  }
  write_file(dir / "per_query.csv", per_query_csv(report));
}

}  // namespace mvs
