#include "tfv/report.hpp"

#include <cstdio>
#include <fstream>

#include "tfv/types.hpp"

namespace tfv {

bool Report::overall_pass() const {
  for (const auto& c : checks)
    if (!c.informational && !c.pass) return false;
  return true;
}

nlohmann::ordered_json report_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = tool_name;
  j["version"] = tool_version;
  j["command"] = r.command;
  j["config"] = r.config;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["pass"] = c.pass;
    cj["max_residual"] = c.max_residual;
    cj["tolerance"] = c.tolerance;
    auto w = c.witnesses;
    if (c.informational) w["informational"] = true;
    cj["witnesses"] = w;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["pass"] = r.overall_pass();
  j["wall_ms"] = r.wall_ms;
  return j;
}

std::string render_report(const Report& r) { return report_json(r).dump(2) + "\n"; }

void emit_report(const Report& r, const std::string& out_path) {
  const std::string text = render_report(r);
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file: " + out_path);
  f << text;
  if (!f.good()) throw ConfigError("failed writing output file: " + out_path);
}

}  // namespace tfv
