#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace tfv {

inline constexpr const char* tool_name = "tfv";
inline constexpr const char* tool_version = "0.1.0";

struct CheckEntry {
  std::string id;
  bool pass = false;
  double max_residual = 0;
  double tolerance = 0;
  bool informational = false;  // excluded from the overall verdict, echoed in witnesses
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::object();
};

struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<CheckEntry> checks;
  double wall_ms = 0;

  bool overall_pass() const;
};

nlohmann::ordered_json report_json(const Report& r);

/// Pretty-printed JSON document, trailing newline included. Everything except
/// wall_ms is byte-stable for a fixed config on a fixed build.
std::string render_report(const Report& r);

/// Write to out_path, or to stdout when out_path is empty.
void emit_report(const Report& r, const std::string& out_path);

}  // namespace tfv
