#include "kreinfield/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <json.hpp>

#include "kreinfield/borchers.hpp"
#include "kreinfield/errors.hpp"
#include "kreinfield/fock.hpp"
#include "kreinfield/gupta_bleuler.hpp"
#include "kreinfield/json_io.hpp"
#include "kreinfield/krein.hpp"
#include "kreinfield/twopoint.hpp"

namespace kreinfield::suite {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  explicit Recorder(Report& r) : report_(r) {}

  /// Times `fn`, which returns the residual; pass iff residual <= tol.
  void at_most(const std::string& name, double tol, const std::function<double()>& fn) {
    run(name, tol, "<=", fn, [tol](double r) { return r <= tol; });
  }
  void at_least(const std::string& name, double bound, const std::function<double()>& fn) {
    run(name, bound, ">=", fn, [bound](double r) { return r >= bound; });
  }
  void above(const std::string& name, double bound, const std::function<double()>& fn) {
    run(name, bound, ">", fn, [bound](double r) { return r > bound; });
  }
  void equals(const std::string& name, double expected, const std::function<double()>& fn) {
    run(name, expected, "==", fn, [expected](double r) { return r == expected; });
  }

  void table(const std::string& name, const json& j) { report_.tables.emplace_back(name, j.dump()); }

 private:
  void run(const std::string& name, double tol, const char* cmp, const std::function<double()>& fn,
           const std::function<bool(double)>& ok) {
    Check c;
    c.name = name;
    c.tolerance = tol;
    c.comparison = cmp;
    const auto start = Clock::now();
    try {
      c.residual = fn();
      c.pass = std::isfinite(c.residual) && ok(c.residual);
    } catch (const std::exception&) {
      c.residual = std::numeric_limits<double>::infinity();
      c.pass = false;
    }
    c.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    report_.checks.push_back(c);
  }

  Report& report_;
};

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n, Eigen::Index nulls) {
  std::normal_distribution<double> normal;
  Matrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = {normal(rng), normal(rng)};
  const Eigen::HouseholderQR<Matrix> qr(x);
  const Matrix q = qr.householderQ();
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = i < nulls ? 0.0 : normal(rng) + (normal(rng) > 0 ? 0.5 : -0.5);
  return hermitian_part(q * d.cast<cplx>().asDiagonal() * q.adjoint());
}

Matrix random_positive(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Matrix y(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) y(i, j) = {normal(rng), normal(rng)};
  return hermitian_part(Matrix::Identity(n, n) + y * y.adjoint() / static_cast<double>(n));
}

void krein_suite(const config::RunConfig& cfg, Recorder& rec) {
  const Tolerances& tol = cfg.tol;
  rec.at_most("krein.metric_operator_example", tol.eq, [&] {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 2.0;
    g(1, 1) = -3.0;
    const auto m = core::metric_operator(core::build_space(g, tol), tol);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 2.0 / 3.0;
    expected(1, 1) = -1.0;
    return max_abs(m.eta - expected);
  });

  struct Trial {
    double eta_sq = 0.0;
    double reproduce = 0.0;
    int not_maximal = 0;
    int signature_mismatch = 0;
  };
  Trial worst;
  {
    std::mt19937_64 rng(cfg.seed);
    for (int t = 0; t < cfg.krein_trials; ++t) {
      const Matrix g = random_hermitian(rng, 8, t % 3);
      const Matrix aux = (t % 2 == 0) ? Matrix(Matrix::Identity(8, 8)) : random_positive(rng, 8);
      const auto space = core::build_space(g, aux, tol);
      const auto closure = core::maximalize(space, tol);
      const Eigen::Index r = closure.krein.eta.rows();
      worst.eta_sq = std::max(worst.eta_sq, max_abs(closure.krein.eta * closure.krein.eta - Matrix::Identity(r, r)));
      worst.reproduce = std::max(worst.reproduce, core::inner_product_residual(space, closure));
      if (!core::is_maximal(closure.krein, 1.0 - tol.null)) ++worst.not_maximal;
      const auto sig = core::signature(g, tol.null);
      const RealVector spec = core::metric_spectrum(closure.krein);
      const auto plus = static_cast<std::size_t>((spec.array() > 0.0).count());
      const auto minus = static_cast<std::size_t>((spec.array() < 0.0).count());
      if (plus != sig.n_plus || minus != sig.n_minus) ++worst.signature_mismatch;
    }
  }
  rec.at_most("krein.random.eta_squared_identity", tol.eq, [&] { return worst.eta_sq; });
  rec.at_most("krein.random.inner_product_reproduced", tol.eq, [&] { return worst.reproduce; });
  rec.equals("krein.random.not_maximal_count", 0.0, [&] { return worst.not_maximal; });
  rec.equals("krein.random.signature_mismatch_count", 0.0, [&] { return worst.signature_mismatch; });
  rec.table("krein.random", json{{"trials", cfg.krein_trials}, {"dim", 8}});
}

struct FockData {
  fock::FockSpace space;
  gns::WightmanFunctional w;
};

/// Wightman data generated by the letters A_mu(e_k sqrt(2 omega L^3)) on a lattice.
FockData fock_wightman(const config::LatticeSpec& spec, int n_max, std::size_t dim_limit, int d_max) {
  fock::FockSpace space(spec.build(), n_max, dim_limit);
  std::vector<fock::FieldOperator> letters;
  const auto& lattice = space.lattice();
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const auto f = fock::TestFunction::mode_indicator(lattice, m, 1.0 / lattice.normalization(m));
    for (int mu = 0; mu < 4; ++mu) letters.push_back(fock::field_A(space, mu, f));
  }
  auto w = fock::wightman_from_fock(space, letters, d_max);
  return {std::move(space), std::move(w)};
}

void gns_suite(const config::RunConfig& cfg, Recorder& rec) {
  const Tolerances& tol = cfg.tol;
  const auto& spec = cfg.lattices.front();
  const FockData data = fock_wightman(spec, std::max(cfg.n_max, 2), cfg.dim_limit, 4);
  const auto& w = data.w;
  rec.at_most("gns.hermiticity", tol.eq, [&] { return gns::hermiticity_defect(w); });

  const gns::GnsSpace g = gns::gns_construct(w, tol);
  const int b = w.letters();
  rec.at_most("gns.one_particle_gram", tol.eq, [&] {
    double dev = 0.0;
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) {
        const Vector x = g.coordinates({{gns::Word{i}, 1.0}});
        const Vector y = g.coordinates({{gns::Word{j}, 1.0}});
        const double expected = (i % 4 == j % 4 && i / 4 == j / 4) ? -metric(i % 4, j % 4) : 0.0;
        dev = std::max(dev, std::abs(g.inner(x, y) - expected));
      }
    return dev;
  });
  rec.at_most("gns.field_action_reproduces_w2", tol.eq, [&] {
    double dev = 0.0;
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) {
        const Vector v = gns::field_action_coordinates(g, i, {{gns::Word{j}, 1.0}});
        dev = std::max(dev, std::abs(g.inner(g.vacuum(), v) - w.value({i, j})));
      }
    return dev;
  });

  const auto weights = core::normalized_weights(w);
  const auto table = core::seminorm_dominance(w, weights, tol.eq);
  rec.at_most("gns.seminorm_dominance", 1.0 + tol.eq, [&] { return table.max_constant; });

  std::vector<int> perm(static_cast<std::size_t>(b));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(cfg.seed + 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  rec.at_most("gns.seminorm_dominance_permutation", tol.eq, [&] {
    const auto wp = w.relabelled(perm);
    const auto tp = core::seminorm_dominance(wp, core::normalized_weights(wp), tol.eq);
    if (tp.admissible != table.admissible) return 1.0;
    double dev = 0.0;
    for (const auto& [key, c] : table.constants) dev = std::max(dev, std::abs(c - tp.constants.at(key)));
    return dev;
  });

  json constants = json::array();
  for (const auto& [key, c] : table.constants) constants.push_back({{"n", key.first}, {"m", key.second}, {"c", c}});
  rec.table("gns.dominance", json{{"lattice", spec.name}, {"letters", b}, {"d_max", 4}, {"gns_dim", g.dim()},
                                   {"constants", constants}});
}

void fock_suite(const config::RunConfig& cfg, Recorder& rec) {
  const Tolerances& tol = cfg.tol;
  json dims = json::array();
  for (const auto& spec : cfg.lattices) {
    const fock::FockSpace space(spec.build(), cfg.n_max, cfg.dim_limit);
    const std::string p = "fock." + spec.name + ".";
    const auto& lattice = space.lattice();
    dims.push_back({{"lattice", spec.name}, {"modes", lattice.size()}, {"dim", space.dim()},
                    {"reflection_closed", lattice.reflection_closed()}});

    rec.at_most(p + "eta_squared_identity", 0.0, [&] {
      return (space.eta().array() * space.eta().array() - 1.0).abs().maxCoeff();
    });
    const auto spectrum = fock::spectral_report(space, 1e-12);
    rec.at_least(p + "spectral_min_mass_squared", -1e-12, [&] { return spectrum.min_mass_squared; });
    rec.at_least(p + "spectral_min_energy", -1e-12, [&] { return spectrum.min_energy; });
    rec.equals(p + "vacuum_unique", 1.0, [&] { return static_cast<double>(fock::zero_energy_states(space, tol.eq)); });

    rec.at_most(p + "covariant_ccr", tol.eq, [&] {
      double dev = 0.0;
      const auto cap = static_cast<Eigen::Index>(fock::below_cap(space));
      for (std::size_t m = 0; m < lattice.size(); ++m)
        for (std::size_t n = 0; n < lattice.size(); ++n)
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
              const auto a = fock::ladder(space, m, mu, fock::LadderKind::Annihilate);
              const auto c = fock::ladder(space, n, nu, fock::LadderKind::Create);
              Matrix comm = fock::restricted_commutator(space, a, c);
              if (m == n) comm.topRows(cap).diagonal().array() += metric(mu, nu);
              dev = std::max(dev, max_abs(comm));
            }
      return dev;
    });

    const auto f = fock::TestFunction::sample(lattice, cfg.test_functions.front());
    rec.at_most(p + "krein_hermitian_fields", tol.eq, [&] {
      double dev = 0.0;
      for (int mu = 0; mu < 4; ++mu) {
        dev = std::max(dev, fock::krein_hermiticity_defect(space, fock::field_A(space, mu, f)));
        for (int nu = 0; nu < 4; ++nu)
          dev = std::max(dev, fock::krein_hermiticity_defect(space, fock::field_F(space, mu, nu, f)));
      }
      return std::max(dev, fock::krein_hermiticity_defect(space, fock::field_B(space, f).full));
    });

    rec.at_most(p + "translation_covariance", tol.eq, [&] {
      std::mt19937_64 rng(cfg.seed + 2);
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      double dev = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const FourVector a(u(rng), u(rng), u(rng), u(rng));
        const auto ua = fock::translation(space, a);
        const auto ua_inv = fock::translation(space, -a);
        const SparseMatrix eta = space.eta_matrix();
        dev = std::max(dev, max_abs(Matrix(ua.matrix * eta - eta * ua.matrix)));
        const auto fa = f.translated(lattice, a);
        for (int mu = 0; mu < 4; ++mu) {
          const SparseMatrix lhs = ua.matrix * fock::field_A(space, mu, f).matrix * ua_inv.matrix;
          dev = std::max(dev, max_abs(Matrix(lhs - fock::field_A(space, mu, fa).matrix)));
        }
      }
      return dev;
    });
  }
  rec.table("fock.lattices", dims);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void gupta_bleuler_suite(const config::RunConfig& cfg, Recorder& rec) {
  const Tolerances& tol = cfg.tol;
  json rows = json::array();
  for (const auto& spec : cfg.lattices) {
    const fock::FockSpace space(spec.build(), cfg.n_max, cfg.dim_limit);
    const std::string p = "gupta_bleuler." + spec.name + ".";
    const auto& lattice = space.lattice();
    const gb::PhysicalSubspace ps = gb::physical_subspace(space, tol);
    const auto f = fock::TestFunction::sample(lattice, cfg.test_functions.front());

    rec.equals(p + "condition1_vacuum_physical", 1.0, [&] { return ps.contains_vacuum ? 1.0 : 0.0; });
    rec.at_most(p + "joint_kernel_residual", tol.null, [&] { return ps.kernel_residual; });
    double worst_null = 0.0;
    rec.at_most(p + "condition2_F_preserves_physical", tol.obs, [&] {
      double dev = 0.0;
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
          const auto r = gb::observable_preservation(fock::field_F(space, mu, nu, f), ps, tol);
          dev = std::max(dev, r.residual_physical);
          worst_null = std::max(worst_null, r.residual_null);
        }
      return dev;
    });
    rec.at_least(p + "condition3_gram_psd", -tol.null, [&] { return ps.min_eigenvalue; });
    rec.at_most(p + "condition4_F_preserves_null", tol.obs, [&] { return worst_null; });
    rec.at_most(p + "condition5_weak_maxwell", tol.eq, [&] {
      double dev = 0.0;
      for (int mu = 0; mu < 4; ++mu) dev = std::max(dev, gb::weak_maxwell(space, ps, mu, f));
      return dev;
    });
    rec.at_most(p + "gauge_field_vanishes_weakly", tol.eq, [&] { return gb::gauge_expectation(space, ps, f); });
    rec.above(p + "potential_not_observable", tol.obs, [&] {
      return gb::observable_preservation(fock::field_A(space, 0, f), ps, tol).residual_physical;
    });

    const gb::PhysicalQuotient q = gb::physical_quotient(ps, tol);
    rec.equals(p + "photon_count_per_mode", 2.0, [&] {
      return static_cast<double>(q.sector_dims.at(1)) / static_cast<double>(lattice.size());
    });
    rec.at_most(p + "physical_fock_structure", 0.0, [&] {
      double dev = 0.0;
      for (int n = 0; n <= cfg.n_max; ++n) {
        const std::size_t expected = binomial(3 * lattice.size() + static_cast<std::size_t>(n) - 1, static_cast<std::size_t>(n));
        dev = std::max(dev, std::abs(static_cast<double>(ps.sector_dims[static_cast<std::size_t>(n)]) -
                                     static_cast<double>(expected)));
      }
      return dev;
    });
    rows.push_back({{"lattice", spec.name},
                    {"modes", lattice.size()},
                    {"fock_dim", space.dim()},
                    {"physical_dims", ps.sector_dims},
                    {"null_dims", ps.null_dims},
                    {"quotient_dims", q.sector_dims},
                    {"min_gram_eigenvalue", ps.min_eigenvalue}});
  }
  rec.table("gupta_bleuler.dimensions", rows);
}

void twopoint_suite(const config::RunConfig& cfg, Recorder& rec) {
  const Tolerances& tol = cfg.tol;
  const twopoint::ShellQuadrature quad(cfg.quadrature);
  const TestProfile& f = cfg.test_functions.front();
  const TestProfile& g = cfg.test_functions.size() > 1 ? cfg.test_functions[1] : f;

  twopoint::WitnessReport witness;
  rec.at_least("twopoint.indefiniteness_witness", 1.0, [&] {
    witness = twopoint::indefiniteness_witness({f}, quad, tol);
    return static_cast<double>(witness.signature.n_minus);
  });
  rec.table("twopoint.witness", json{{"n_plus", witness.signature.n_plus},
                                     {"n_zero", witness.signature.n_zero},
                                     {"n_minus", witness.signature.n_minus}});

  rec.at_most("twopoint.feynman_reduction", tol.eq, [&] {
    const cplx d = twopoint::dplus(f, g, quad);
    double dev = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      const cplx a = twopoint::two_point_A(mu, mu, f, g, twopoint::GaugeParameters::feynman(), quad, tol);
      const cplx expected = -metric(mu, mu) * f.components[static_cast<std::size_t>(mu)] *
                            std::conj(g.components[static_cast<std::size_t>(mu)]) * d;
      dev = std::max(dev, std::abs(a - expected));
    }
    return dev;
  });

  rec.equals("twopoint.landau_rejected", 1.0, [&] {
    try {
      twopoint::two_point_A(0, 0, f, g, {1.0, 0.0}, quad, tol);
    } catch (const Error& e) {
      return e.code() == ErrorCode::LandauGauge ? 1.0 : 0.0;
    }
    return 0.0;
  });

  rec.at_most("twopoint.eplus_hermitian", tol.eq, [&] {
    return std::abs(twopoint::eplus(f, g, quad) - std::conj(twopoint::eplus(g, f, quad)));
  });

  rec.at_most("twopoint.gauge_independence", tol.eq, [&] {
    double spread = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu)
        for (int rho = 0; rho < 4; ++rho)
          for (int sigma = rho + 1; sigma < 4; ++sigma)
            spread = std::max(spread, twopoint::gauge_independence(mu, nu, rho, sigma, f, g, cfg.gauges, quad, tol));
    return spread;
  });

  const auto& loc = cfg.locality;
  auto located = [&](double t, double x) { return TestProfile::gaussian(FourVector(t, 0.0, 0.0, x), loc.width); };
  const TestProfile origin = located(0.0, 0.0);
  auto level_rows = [](const twopoint::LocalityTable& t) {
    json rows = json::array();
    for (const auto& l : t.levels)
      rows.push_back({{"polar", l.spec.polar},
                      {"azimuth", l.spec.azimuth},
                      {"radial", l.spec.radial},
                      {"commutator", l.commutator},
                      {"relative", l.relative}});
    return rows;
  };
  twopoint::LocalityTable spacelike;
  rec.at_most("twopoint.locality_spacelike", tol.loc, [&] {
    spacelike = twopoint::commutator_locality(located(loc.time_offset, loc.spatial_offset), origin, loc.base,
                                              loc.levels, tol);
    return spacelike.decays ? spacelike.levels.back().relative : std::numeric_limits<double>::infinity();
  });
  twopoint::LocalityTable control;
  rec.above("twopoint.locality_timelike_control", 0.1, [&] {
    control = twopoint::commutator_table(located(loc.control_time, loc.control_offset), origin, loc.base,
                                         loc.levels, tol);
    return control.levels.back().relative;
  });
  rec.table("twopoint.locality", json{{"spacelike", level_rows(spacelike)},
                                      {"spacelike_margin", spacelike.margin},
                                      {"timelike", level_rows(control)},
                                      {"timelike_margin", control.margin}});

  const auto& cross = cfg.cross;
  std::vector<double> spacings = cross.spacings;
  if (static_cast<int>(spacings.size()) > cfg.refine) spacings.resize(static_cast<std::size_t>(cfg.refine));
  twopoint::CrossTable table;
  rec.at_most("twopoint.cross_module", cross.final_tol, [&] {
    const TestProfile cf = TestProfile::gaussian(FourVector::Zero(), 1.0);
    table = twopoint::cross_module_table(0, 0, cf, cf, spacings, cross.cutoff, cross.quadrature, cross.final_tol);
    return table.monotone ? table.levels.back().relative_gap : std::numeric_limits<double>::infinity();
  });
  json rows = json::array();
  double min_m2 = 0.0;
  double min_e = 0.0;
  for (const auto& l : table.levels) {
    rows.push_back({{"spacing", l.spacing},
                    {"k_max", l.k_max},
                    {"modes", l.modes},
                    {"fock_dim", l.fock_dim},
                    {"fock", {l.fock_value.real(), l.fock_value.imag()}},
                    {"quadrature", {l.quadrature_value.real(), l.quadrature_value.imag()}},
                    {"relative_gap", l.relative_gap}});
    min_m2 = std::min(min_m2, l.min_mass_squared);
    min_e = std::min(min_e, l.min_energy);
  }
  rec.table("twopoint.cross_module", rows);
  rec.at_least("twopoint.cross_lattice_spectral", -1e-12, [&] { return std::min(min_m2, min_e); });
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "krein") return Suite::Krein;
  if (name == "gns") return Suite::Gns;
  if (name == "fock") return Suite::Fock;
  if (name == "gupta-bleuler") return Suite::GuptaBleuler;
  if (name == "twopoint") return Suite::Twopoint;
  if (name == "all") return Suite::All;
  throw Error(ErrorCode::ConfigInvalid, "suite: unknown suite \"" + name + "\"");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Krein: return "krein";
    case Suite::Gns: return "gns";
    case Suite::Fock: return "fock";
    case Suite::GuptaBleuler: return "gupta-bleuler";
    case Suite::Twopoint: return "twopoint";
    case Suite::All: return "all";
  }
  return "unknown";
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Report run_suite(const config::RunConfig& cfg, Suite suite) {
  config::validate(cfg);
  Report report;
  report.suite = to_string(suite);
  Recorder rec(report);
  const bool all = suite == Suite::All;
  if (all || suite == Suite::Krein) krein_suite(cfg, rec);
  if (all || suite == Suite::Gns) gns_suite(cfg, rec);
  if (all || suite == Suite::Fock) fock_suite(cfg, rec);
  if (all || suite == Suite::GuptaBleuler) gupta_bleuler_suite(cfg, rec);
  if (all || suite == Suite::Twopoint) twopoint_suite(cfg, rec);
  return report;
}

std::string to_json(const Report& report, bool include_wall_time) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json j{{"name", c.name},
           {"pass", c.pass},
           {"residual", std::isfinite(c.residual) ? json(c.residual) : json("inf")},
           {"tolerance", c.tolerance},
           {"comparison", c.comparison}};
    if (include_wall_time) j["wall_time"] = c.wall_time;
    checks.push_back(j);
  }
  json tables = json::object();
  for (const auto& [name, text] : report.tables) tables[name] = json::parse(text);
  return json{{"suite", report.suite}, {"pass", report.pass()}, {"checks", checks}, {"tables", tables}}.dump(2);
}

int run_and_write(const config::RunConfig& cfg, Suite suite, const std::filesystem::path& out) {
  const Report report = run_suite(cfg, suite);
  io::write_text(out, to_json(report) + "\n");
  return report.pass() ? 0 : 1;
}

}  // namespace kreinfield::suite
