#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kreinfield/config.hpp"

namespace kreinfield::suite {

enum class Suite { Krein, Gns, Fock, GuptaBleuler, Twopoint, All };

/// "krein", "gns", "fock", "gupta-bleuler", "twopoint", "all". Throws ConfigInvalid.
Suite parse_suite(const std::string& name);
std::string to_string(Suite s);

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string comparison = "<=";  // how residual is compared with tolerance
  double wall_time = 0.0;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> tables;  // name, JSON text

  bool pass() const;
};

Report run_suite(const config::RunConfig& cfg, Suite suite);

/// Deterministic JSON: identical inputs give identical text apart from wall_time.
std::string to_json(const Report& report, bool include_wall_time = true);

/// Runs, writes the report and returns the exit code (0 iff every check passed).
/// Throws ReportWriteFailed.
int run_and_write(const config::RunConfig& cfg, Suite suite, const std::filesystem::path& out);

}  // namespace kreinfield::suite
