#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace permstat {

using Json = nlohmann::ordered_json;

std::string tool_version();

struct CheckRecord {
  std::string name;
  Json inputs = Json::object();
  Json analytic = nullptr;
  Json empirical = nullptr;
  Json se = nullptr;
  bool pass = true;
};

// Machine-readable result of one command. Field order and number
// formatting are fixed, so equal inputs give byte-identical output.
class Report {
 public:
  Report(std::string command, Json config);

  void add(CheckRecord record) { checks_.push_back(std::move(record)); }
  const std::vector<CheckRecord>& checks() const { return checks_; }
  bool all_pass() const;

  Json to_json() const;
  std::string dump() const;     // two-space indented JSON plus newline
  std::string to_text() const;  // one line per check

 private:
  std::string command_;
  Json config_;
  std::vector<CheckRecord> checks_;
};

}  // namespace permstat
