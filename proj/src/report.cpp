#include "permstat/report.hpp"

#include <sstream>

namespace permstat {

std::string tool_version() { return PERMSTAT_VERSION; }

Report::Report(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

bool Report::all_pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json checks = Json::array();
  std::size_t passed = 0;
  for (const auto& c : checks_) {
    passed += c.pass ? 1 : 0;
    checks.push_back({{"name", c.name},
                      {"inputs", c.inputs},
                      {"analytic", c.analytic},
                      {"empirical", c.empirical},
                      {"se", c.se},
                      {"verdict", c.pass ? "PASS" : "FAIL"}});
  }
  return {{"tool_version", tool_version()},
          {"command", command_},
          {"config", config_},
          {"checks", checks},
          {"summary", {{"passed", passed}, {"failed", checks_.size() - passed}}}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

std::string Report::to_text() const {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : checks_) {
    passed += c.pass ? 1 : 0;
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.analytic.is_null()) os << "  analytic=" << c.analytic.dump();
    if (!c.empirical.is_null()) os << "  empirical=" << c.empirical.dump();
    if (!c.se.is_null()) os << "  se=" << c.se.dump();
    os << "\n";
  }
  os << command_ << ": " << passed << " passed, " << checks_.size() - passed << " failed\n";
  return os.str();
}

}  // namespace permstat
