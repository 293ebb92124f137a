#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kreinfield/config.hpp"
#include "kreinfield/errors.hpp"
#include "kreinfield/json_io.hpp"
#include "kreinfield/suite.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kreinfield: certification suites for indefinite-metric gauge field data"};
  app.footer(
      "Any config key can be overridden with KREINFIELD_<SECTION>_<KEY>, e.g. KREINFIELD_FOCK_N_MAX=1.\n"
      "Exit code 0 iff every check in the report passed.");

  std::string config_path;
  std::string suite_name = "all";
  std::string out_path = "kreinfield_report.json";
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;

  app.add_option("--config", config_path, "INI configuration file (defaults are used when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--suite", suite_name, "Suite to run")
      ->check(CLI::IsMember({"krein", "gns", "fock", "gupta-bleuler", "twopoint", "all"}));
  app.add_option("--out", out_path, "Report JSON path");
  app.add_option("--seed", seed, "Seed for randomized property checks");
  app.add_option("--refine", refine, "Number of refinement levels for convergence tables")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = config_path.empty() ? kreinfield::config::parse_config("") : kreinfield::config::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (refine) {
      cfg.refine = *refine;
      cfg.locality.levels = *refine;
    }
    kreinfield::config::validate(cfg);
    const auto suite = kreinfield::suite::parse_suite(suite_name);
    const auto report = kreinfield::suite::run_suite(cfg, suite);
    kreinfield::io::write_text(out_path, kreinfield::suite::to_json(report) + "\n");

    std::size_t passed = 0;
    for (const auto& c : report.checks) {
      if (c.pass) ++passed;
      else std::cerr << "FAIL " << c.name << ": " << c.residual << " " << c.comparison << " " << c.tolerance << "\n";
    }
    std::cout << suite_name << ": " << passed << "/" << report.checks.size() << " checks passed, report written to "
              << out_path << "\n";
    return report.pass() ? 0 : kExitChecksFailed;
  } catch (const kreinfield::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
