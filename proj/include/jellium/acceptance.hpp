#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace jellium::acceptance {

/// Published reference values the criteria compare against. Overriding one
/// (validate --tamper) is the negative control for the suite.
std::map<std::string, double> default_references();

struct Options {
  bool quick = false;                        // skip criteria budgeted above 60 s
  std::map<std::string, double> references;  // merged over the defaults
  std::vector<int> only;                     // empty: all criteria
};

struct Result {
  int id = 0;
  std::string name;
  std::string status;  // "pass", "fail", "skipped"
  std::string detail;
  nlohmann::json measured = nlohmann::json::object();
  double seconds = 0.0;
};

std::vector<Result> run(const Options& opts = {});
nlohmann::json to_json(const std::vector<Result>& results);
/// One line per criterion: "criterion N [PASS] name: detail".
std::string summary_lines(const std::vector<Result>& results);
bool all_passed(const std::vector<Result>& results);

}  // namespace jellium::acceptance
