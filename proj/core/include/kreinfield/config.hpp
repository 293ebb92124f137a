#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kreinfield/fock.hpp"
#include "kreinfield/linalg.hpp"
#include "kreinfield/profile.hpp"
#include "kreinfield/twopoint.hpp"

namespace kreinfield::config {

inline constexpr const char* kEnvPrefix = "KREINFIELD_";

struct LatticeSpec {
  std::string name;
  double box_length = 0.0;
  int k_max = 1;
  std::vector<std::array<int, 3>> modes;  // explicit list; empty means the cubic lattice

  fock::MomentumLattice build() const;
};

struct LocalitySpec {
  double time_offset = 0.5;     // x0 - y0
  double spatial_offset = 6.5;  // |x - y|, along the third axis
  double control_time = 6.5;    // timelike control pair
  double control_offset = 5.0;
  double width = 1.0;
  int levels = 3;
  twopoint::QuadratureSpec base;
};

struct CrossSpec {
  std::vector<double> spacings{0.5, 0.25, 0.125};
  double cutoff = 3.5;
  double final_tol = 1e-2;
  twopoint::QuadratureSpec quadrature;
};

struct RunConfig {
  std::vector<LatticeSpec> lattices;
  int n_max = 2;
  std::size_t dim_limit = fock::kDefaultDimLimit;
  Tolerances tol;
  std::vector<twopoint::GaugeParameters> gauges;
  std::vector<TestProfile> test_functions;
  twopoint::QuadratureSpec quadrature;
  LocalitySpec locality;
  CrossSpec cross;
  std::uint64_t seed = 20240601;
  int refine = 3;
  int krein_trials = 100;
};

/// Values used for every key the config file leaves out.
RunConfig default_config();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads KREINFIELD_<SECTION>_<KEY> (upper case) from the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Parses INI text (key = value under [section] headers) on top of the defaults; the
/// environment overrides file values. Throws ConfigInvalid naming the offending field.
RunConfig parse_config(const std::string& text, const EnvLookup& env = process_env);
RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env);

/// Throws ConfigInvalid naming the offending field.
void validate(const RunConfig& cfg);

}  // namespace kreinfield::config
