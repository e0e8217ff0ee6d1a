#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewprod/classifier.hpp"
#include "skewprod/cocycle.hpp"
#include "skewprod/crossed.hpp"
#include "skewprod/solver.hpp"
#include "skewprod/states.hpp"

namespace skewprod {

/// Scenario file violation; `path` names the offending field (dot notation).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Scenario {
  std::string name;
  CocycleSpec cocycle;
  std::optional<CocycleSpec> conjugate_against;
  int scan_n_max = 12;
  SolverConfig solver;
  Limits limits;
  std::vector<std::int64_t> windows;
  std::vector<std::string> tasks;  // subset of classify/coboundary/average/states/conjugacy
  std::vector<MeasureSpec> measures;
};

struct RunOptions {
  int threads = 1;
  std::uint64_t seed = 1;
};

/// Deterministic run artifacts: the JSON report plus flat TSV tables keyed
/// by file name.  Data sections carry no wall-clock content, so re-running
/// a scenario reproduces every byte.
struct RunReport {
  std::string report_json;
  std::map<std::string, std::string> tables;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

/// Structural + semantic validation (beyond parsing): angle irrationality,
/// measure mass/positivity/Toeplitz, task names.  Throws SchemaError.
void validate_scenario(const Scenario& s);

RunReport run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Writes report.json and the tables into out_dir (created if needed).
void write_report(const RunReport& r, const std::string& out_dir);

}  // namespace skewprod
