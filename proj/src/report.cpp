#include "mds/errors.hpp"
#include "mds/harness.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mds {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Shortest round-trip representation; the CSV uses the same digits as the JSON.
std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return Json(v).dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

std::string report_json(const Report& r, bool include_wall_time) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["check"] = r.check;
  j["structure"] = r.structure;
  j["seed"] = r.seed;
  j["tolerances"] = {{"point", r.tol.point},   {"min_gap", r.tol.min_gap},   {"relative", r.tol.relative},
                     {"root", r.tol.root},     {"root_arg", r.tol.root_arg}, {"max_iterations", r.tol.max_iterations}};
  j["passed"] = r.passed();
  j["samples"] = r.samples;
  j["tested"] = r.tested;
  j["skipped"] = r.skipped;
  j["violations"] = r.violations;
  j["errors"] = r.errors;
  j["empty_domain"] = r.empty_domain;
  j["note"] = r.note;
  j["value"] = {{"name", r.value_name}, {"min", r.min_value}, {"max", r.max_value}};
  j["metrics"] = Json::array();
  for (const auto& m : r.metrics) j["metrics"].push_back({{"name", m.name}, {"min", m.min}, {"max", m.max}});
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) {
    Json wj{{"index", w.index}, {"value", w.value}, {"angles", w.angles}};
    if (!w.error.empty()) wj["error"] = w.error;
    j["witnesses"].push_back(std::move(wj));
  }
  if (include_wall_time) j["wall_time_s"] = r.wall_time;
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "index,violation," << csv_escape(r.value_name);
  for (const auto& m : r.metrics) os << "," << csv_escape(m.name);
  os << ",witness\n";
  for (const auto& row : r.rows) {
    os << row.index << "," << (row.violation ? 1 : 0) << "," << number(row.value);
    for (std::size_t k = 0; k < r.metrics.size(); ++k) {
      os << "," << (k < row.metrics.size() ? number(row.metrics[k]) : std::string());
    }
    os << ",";
    for (std::size_t k = 0; k < row.witness.size(); ++k) os << (k ? ";" : "") << number(row.witness[k]);
    os << "\n";
  }
  return os.str();
}

void emit_report(const Report& r, ReportFormat format, const std::string& path, bool include_wall_time) {
  const std::string text = format == ReportFormat::Json ? report_json(r, include_wall_time) : report_csv(r);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

} // namespace mds
