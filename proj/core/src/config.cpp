#include "kreinfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kreinfield/errors.hpp"
#include "kreinfield/json_io.hpp"

namespace kreinfield::config {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) invalid(field, "expected a finite number, got \"" + v + "\"");
    return d;
  } catch (const std::logic_error&) {
    invalid(field, "expected a number, got \"" + v + "\"");
  }
}

long long to_int(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) invalid(field, "expected an integer, got \"" + v + "\"");
    return i;
  } catch (const std::logic_error&) {
    invalid(field, "expected an integer, got \"" + v + "\"");
  }
}

std::vector<double> to_doubles(const std::string& field, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(field, item));
  return out;
}

class Source {
 public:
  Source(pt::ptree tree, EnvLookup env) : tree_(std::move(tree)), env_(std::move(env)) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    if (env_) {
      if (auto v = env_(std::string(kEnvPrefix) + upper(section) + "_" + upper(key))) return trim(*v);
    }
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void read(const std::string& section, const std::string& key, double& out) const {
    if (auto v = get(section, key)) out = to_double(section + "." + key, *v);
  }
  void read(const std::string& section, const std::string& key, int& out) const {
    if (auto v = get(section, key)) out = static_cast<int>(to_int(section + "." + key, *v));
  }
  void read(const std::string& section, const std::string& key, std::size_t& out) const {
    if (auto v = get(section, key)) {
      const long long i = to_int(section + "." + key, *v);
      if (i < 0) invalid(section + "." + key, "must be nonnegative");
      out = static_cast<std::size_t>(i);
    }
  }
  void read_u64(const std::string& section, const std::string& key, std::uint64_t& out) const {
    if (auto v = get(section, key)) {
      try {
        std::size_t used = 0;
        out = std::stoull(*v, &used);
        if (used != v->size()) invalid(section + "." + key, "expected an unsigned integer");
      } catch (const std::logic_error&) {
        invalid(section + "." + key, "expected an unsigned integer");
      }
    }
  }

  /// Sections named prefix_1, prefix_2, ... in numeric order.
  std::vector<std::string> numbered(const std::string& prefix) const {
    std::map<long long, std::string> found;
    for (const auto& [name, child] : tree_) {
      if (name.rfind(prefix + "_", 0) != 0) continue;
      found[to_int(name, name.substr(prefix.size() + 1))] = name;
    }
    std::vector<std::string> out;
    for (const auto& [k, name] : found) out.push_back(name);
    return out;
  }

 private:
  pt::ptree tree_;
  EnvLookup env_;
};

void read_quadrature(const Source& src, const std::string& section, twopoint::QuadratureSpec& q) {
  src.read(section, "polar", q.polar);
  src.read(section, "azimuth", q.azimuth);
  src.read(section, "radial_points", q.radial);
  src.read(section, "r_min", q.r_min);
  src.read(section, "r_max", q.r_max);
  src.read(section, "h", q.h);
  src.read(section, "rich_tol", q.rich_tol);
}

void validate_quadrature(const std::string& section, const twopoint::QuadratureSpec& q) {
  if (q.polar < 1) invalid(section + ".polar", "must be at least 1");
  if (q.azimuth < 2 || q.azimuth % 2 != 0) invalid(section + ".azimuth", "must be even and at least 2");
  if (q.radial < 1) invalid(section + ".radial_points", "must be at least 1");
  if (q.r_min < 0.0) invalid(section + ".r_min", "must be nonnegative");
  if (q.r_max <= q.r_min) invalid(section + ".r_max", "must exceed r_min");
  if (q.h <= 0.0) invalid(section + ".h", "must be positive");
  if (q.rich_tol <= 0.0) invalid(section + ".rich_tol", "must be positive");
}

std::vector<std::array<int, 3>> parse_modes(const std::string& field, const std::string& v) {
  std::vector<std::array<int, 3>> out;
  for (const auto& item : split(v, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 3) invalid(field, "each mode needs three integers, got \"" + item + "\"");
    std::array<int, 3> m{};
    for (int i = 0; i < 3; ++i) m[static_cast<std::size_t>(i)] = static_cast<int>(to_int(field, parts[static_cast<std::size_t>(i)]));
    out.push_back(m);
  }
  return out;
}

TestProfile default_profile(const FourVector& center, double width) { return TestProfile::gaussian(center, width); }

}  // namespace

fock::MomentumLattice LatticeSpec::build() const {
  if (modes.empty()) return fock::MomentumLattice::cubic(box_length, k_max);
  return fock::MomentumLattice::from_modes(box_length, modes);
}

RunConfig default_config() {
  RunConfig cfg;
  const double two_pi = 2.0 * std::numbers::pi;
  cfg.lattices.push_back({"single", two_pi, 1, {{0, 0, 1}}});
  cfg.lattices.push_back(
      {"seven", two_pi, 1, {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {1, 1, 1}}});
  cfg.gauges = {{0.0, 0.0}, {0.5, 2.0}, {-3.0, 1.0}};
  cfg.test_functions.push_back(default_profile(FourVector::Zero(), 1.0));
  cfg.test_functions.push_back(default_profile(FourVector(0.3, -0.2, 0.1, 0.4), 0.8));
  cfg.locality.base = {4, 8, 8, 0.0, 10.0, 1e-4, 1e-4};
  cfg.cross.quadrature = {32, 64, 256, 0.0, 10.0, 1e-4, 1e-4};
  return cfg;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

RunConfig parse_config(const std::string& text, const EnvLookup& env) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config: ") + e.what());
  }
  const Source src(std::move(tree), env);
  RunConfig cfg = default_config();

  const auto lattice_sections = src.numbered("lattice");
  if (!lattice_sections.empty()) cfg.lattices.clear();
  for (const auto& sec : lattice_sections) {
    LatticeSpec l;
    l.name = src.get(sec, "name").value_or(sec);
    l.box_length = 2.0 * std::numbers::pi;
    src.read(sec, "L", l.box_length);
    src.read(sec, "k_max", l.k_max);
    if (auto v = src.get(sec, "modes")) l.modes = parse_modes(sec + ".modes", *v);
    cfg.lattices.push_back(l);
  }

  src.read("fock", "n_max", cfg.n_max);
  src.read("fock", "dim_limit", cfg.dim_limit);

  src.read("tolerances", "tol_herm", cfg.tol.herm);
  src.read("tolerances", "tol_eq", cfg.tol.eq);
  src.read("tolerances", "tol_null", cfg.tol.null);
  src.read("tolerances", "tol_pd", cfg.tol.pd);
  src.read("tolerances", "tol_obs", cfg.tol.obs);
  src.read("tolerances", "tol_gauge", cfg.tol.gauge);
  src.read("tolerances", "loc_tol", cfg.tol.loc);
  src.read("tolerances", "rich_tol", cfg.tol.rich);

  const auto lambdas = src.get("gauge", "lambda");
  const auto rhos = src.get("gauge", "rho");
  if (lambdas || rhos) {
    const auto l = lambdas ? to_doubles("gauge.lambda", *lambdas) : std::vector<double>{};
    const auto r = rhos ? to_doubles("gauge.rho", *rhos) : std::vector<double>{};
    if (l.size() != r.size()) invalid("gauge.rho", "needs one value per gauge.lambda entry");
    cfg.gauges.clear();
    for (std::size_t i = 0; i < l.size(); ++i) cfg.gauges.push_back({l[i], r[i]});
  }

  const auto tf_sections = src.numbered("testfunction");
  if (!tf_sections.empty()) cfg.test_functions.clear();
  for (const auto& sec : tf_sections) {
    TestProfile p;
    const std::string kind = src.get(sec, "kind").value_or("gaussian");
    if (kind == "shell") p.kind = TestProfile::Kind::Shell;
    else if (kind != "gaussian") invalid(sec + ".kind", "must be gaussian or shell");
    if (auto v = src.get(sec, "center")) {
      const auto c = to_doubles(sec + ".center", *v);
      if (c.size() != 4) invalid(sec + ".center", "needs four coordinates");
      p.center = FourVector(c[0], c[1], c[2], c[3]);
    }
    src.read(sec, "width", p.width);
    src.read(sec, "radius", p.radius);
    src.read(sec, "time_width", p.time_width);
    if (auto v = src.get(sec, "components")) {
      const auto c = to_doubles(sec + ".components", *v);
      if (c.size() != 4) invalid(sec + ".components", "needs four entries");
      for (std::size_t i = 0; i < 4; ++i) p.components[i] = c[i];
    }
    cfg.test_functions.push_back(p);
  }

  read_quadrature(src, "quadrature", cfg.quadrature);

  src.read("locality", "time_offset", cfg.locality.time_offset);
  src.read("locality", "spatial_offset", cfg.locality.spatial_offset);
  src.read("locality", "control_time", cfg.locality.control_time);
  src.read("locality", "control_offset", cfg.locality.control_offset);
  src.read("locality", "width", cfg.locality.width);
  src.read("locality", "levels", cfg.locality.levels);
  read_quadrature(src, "locality", cfg.locality.base);

  if (auto v = src.get("cross", "spacing")) cfg.cross.spacings = to_doubles("cross.spacing", *v);
  src.read("cross", "cutoff", cfg.cross.cutoff);
  src.read("cross", "final_tol", cfg.cross.final_tol);
  read_quadrature(src, "cross", cfg.cross.quadrature);

  src.read_u64("run", "seed", cfg.seed);
  src.read("run", "refine", cfg.refine);
  src.read("run", "krein_trials", cfg.krein_trials);

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, "config: " + std::string(e.what()));
  }
  return parse_config(text, env);
}

void validate(const RunConfig& cfg) {
  if (cfg.lattices.empty()) invalid("lattice", "at least one lattice is required");
  for (std::size_t i = 0; i < cfg.lattices.size(); ++i) {
    const auto& l = cfg.lattices[i];
    const std::string sec = "lattice_" + std::to_string(i + 1);
    if (!(l.box_length > 0.0)) invalid(sec + ".L", "must be positive");
    if (l.modes.empty() && l.k_max < 1) invalid(sec + ".k_max", "must be at least 1");
    for (const auto& m : l.modes)
      if (m == std::array<int, 3>{0, 0, 0}) invalid(sec + ".modes", "the zero mode is excluded");
  }
  if (cfg.n_max < 1) invalid("fock.n_max", "must be at least 1");
  if (cfg.dim_limit < 1) invalid("fock.dim_limit", "must be positive");

  const std::pair<const char*, double> tols[] = {
      {"tolerances.tol_herm", cfg.tol.herm}, {"tolerances.tol_eq", cfg.tol.eq},
      {"tolerances.tol_null", cfg.tol.null}, {"tolerances.tol_pd", cfg.tol.pd},
      {"tolerances.tol_obs", cfg.tol.obs},   {"tolerances.tol_gauge", cfg.tol.gauge},
      {"tolerances.loc_tol", cfg.tol.loc},   {"tolerances.rich_tol", cfg.tol.rich}};
  for (const auto& [name, v] : tols)
    if (!(v > 0.0)) invalid(name, "must be positive");

  if (cfg.gauges.empty()) invalid("gauge.lambda", "at least one gauge is required");
  for (const auto& gp : cfg.gauges)
    if (std::abs(gp.lambda - 1.0) < cfg.tol.gauge)
      invalid("gauge.lambda", "value " + std::to_string(gp.lambda) + " is within tol_gauge of the Landau point 1");

  if (cfg.test_functions.empty()) invalid("testfunction", "at least one test function is required");
  for (std::size_t i = 0; i < cfg.test_functions.size(); ++i) {
    const auto& p = cfg.test_functions[i];
    const std::string sec = "testfunction_" + std::to_string(i + 1);
    if (!(p.width > 0.0)) invalid(sec + ".width", "must be positive");
    if (p.kind == TestProfile::Kind::Shell && !(p.radius > p.width)) invalid(sec + ".radius", "must exceed width");
  }

  validate_quadrature("quadrature", cfg.quadrature);
  validate_quadrature("locality", cfg.locality.base);
  validate_quadrature("cross", cfg.cross.quadrature);
  if (!(cfg.locality.width > 0.0)) invalid("locality.width", "must be positive");
  if (!(std::abs(cfg.locality.control_offset) < std::abs(cfg.locality.control_time)))
    invalid("locality.control_offset", "control pair must be timelike separated");
  if (cfg.locality.levels < 1) invalid("locality.levels", "must be at least 1");
  if (cfg.cross.spacings.empty()) invalid("cross.spacing", "needs at least one spacing");
  for (double s : cfg.cross.spacings)
    if (!(s > 0.0)) invalid("cross.spacing", "must be positive");
  if (!(cfg.cross.cutoff > 0.0)) invalid("cross.cutoff", "must be positive");
  if (!(cfg.cross.final_tol > 0.0)) invalid("cross.final_tol", "must be positive");
  if (cfg.refine < 1) invalid("run.refine", "must be at least 1");
  if (cfg.krein_trials < 1) invalid("run.krein_trials", "must be at least 1");
}

}  // namespace kreinfield::config
