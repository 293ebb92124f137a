#include "kreinfield/twopoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "kreinfield/errors.hpp"
#include "kreinfield/fock.hpp"

namespace kreinfield::twopoint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx conj_amp(const TestProfile& g, int nu, const FourVector& p) { return std::conj(g.amplitude(nu, p)); }

// Integrand of <A_a(f) A_c(g)> at momentum p: D part and the E-part prefactor.
cplx a_kernel(int a, int c, const TestProfile& f, const TestProfile& g, double rho, const FourVector& p) {
  const FourVector pl = lower(p);
  return f.amplitude(a, p) * conj_amp(g, c, p) * (-metric(a, c) - rho * pl(a) * pl(c));
}

cplx e_kernel(int a, int c, const TestProfile& f, const TestProfile& g, const FourVector& p) {
  const FourVector pl = lower(p);
  return f.amplitude(a, p) * conj_amp(g, c, p) * (-pl(a) * pl(c));
}

// Antisymmetrized combination p_nu p_sigma K_{mu rho} - p_nu p_rho K_{mu sigma}
// - p_mu p_sigma K_{nu rho} + p_mu p_rho K_{nu sigma}.
template <typename K>
cplx f_combination(int mu, int nu, int rho, int sigma, const FourVector& p, K&& kernel) {
  const FourVector pl = lower(p);
  return pl(nu) * pl(sigma) * kernel(mu, rho) - pl(nu) * pl(rho) * kernel(mu, sigma) -
         pl(mu) * pl(sigma) * kernel(nu, rho) + pl(mu) * pl(rho) * kernel(nu, sigma);
}

void check_index(int mu) {
  if (mu < 0 || mu > 3) throw Error(ErrorCode::ShapeMismatch, "Lorentz index out of range");
}

}  // namespace

QuadratureSpec QuadratureSpec::refined(int levels) const {
  QuadratureSpec out = *this;
  for (int i = 0; i < levels; ++i) {
    out.polar *= 2;
    out.azimuth *= 2;
    out.radial *= 2;
  }
  return out;
}

std::pair<RealVector, RealVector> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::GridMismatch, "Gauss-Legendre rule needs at least one node");
  // Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes
  RealMatrix jacobi = RealMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(jacobi);
  RealVector x(n);
  RealVector w(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    x(i) = mid + half * es.eigenvalues()(i);
    w(i) = 2.0 * v0 * v0 * half;
  }
  // symmetrize so the rule is exactly reflection invariant about the midpoint
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * ((x(n - 1 - i) - mid) - (x(i) - mid));
    x(i) = mid - s;
    x(n - 1 - i) = mid + s;
    const double ws = 0.5 * (w(i) + w(n - 1 - i));
    w(i) = ws;
    w(n - 1 - i) = ws;
  }
  if (n % 2 == 1) x(n / 2) = mid;
  return {x, w};
}

ShellQuadrature::ShellQuadrature(const QuadratureSpec& spec) : spec_(spec) {
  if (spec.polar < 1 || spec.azimuth < 2 || spec.azimuth % 2 != 0 || spec.radial < 1) {
    throw Error(ErrorCode::GridMismatch, "quadrature needs polar >= 1, an even azimuth count and radial >= 1");
  }
  if (!(spec.r_min >= 0.0) || !(spec.r_max > spec.r_min)) {
    throw Error(ErrorCode::GridMismatch, "quadrature needs 0 <= r_min < r_max");
  }
  if (!(spec.h > 0.0) || !(spec.rich_tol > 0.0)) {
    throw Error(ErrorCode::GridMismatch, "mass step and Richardson tolerance must be positive");
  }
  const auto [ct, wt] = gauss_legendre(spec.polar, -1.0, 1.0);
  const auto [r, wr] = gauss_legendre(spec.radial, spec.r_min, spec.r_max);
  const double dphi = kTwoPi / spec.azimuth;
  points_.reserve(static_cast<std::size_t>(spec.polar) * spec.azimuth * spec.radial);
  weights_.reserve(points_.capacity());
  for (int i = 0; i < spec.polar; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - ct(i) * ct(i)));
    for (int j = 0; j < spec.azimuth; ++j) {
      const double phi = dphi * j;
      const Eigen::Vector3d n(st * std::cos(phi), st * std::sin(phi), ct(i));
      for (int k = 0; k < spec.radial; ++k) {
        points_.push_back(r(k) * n);
        weights_.push_back(wt(i) * dphi * wr(k) * r(k) * r(k));
      }
    }
  }
}

cplx ShellQuadrature::shell_integral(double m2, const std::function<cplx(const FourVector&)>& fn) const {
  const double norm = 1.0 / (2.0 * kTwoPi * kTwoPi * kTwoPi);
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double omega2 = points_[i].squaredNorm() + m2;
    if (omega2 <= 0.0) throw Error(ErrorCode::GridMismatch, "mass shell leaves the radial grid");
    const double omega = std::sqrt(omega2);
    const FourVector p(omega, points_[i](0), points_[i](1), points_[i](2));
    sum += weights_[i] / omega * fn(p);
  }
  return sum * norm;
}

cplx ShellQuadrature::mass_derivative(const std::function<cplx(const FourVector&)>& fn,
                                      const std::function<double(const FourVector&)>& magnitude) const {
  const double h = spec_.h;
  if (spec_.r_min * spec_.r_min <= 2.0 * h) {
    throw Error(ErrorCode::GridMismatch, "r_min^2 must exceed twice the mass step for E+");
  }
  auto central = [&](double step) { return -(shell_integral(step, fn) - shell_integral(-step, fn)) / (2.0 * step); };
  const cplx coarse = central(h);
  const cplx fine = central(0.5 * h);
  const double gap = std::abs(coarse - fine);
  // below this the difference quotient only resolves cancellation noise
  const double noise =
      100.0 * std::numeric_limits<double>::epsilon() / h *
      std::abs(shell_integral(0.0, [&](const FourVector& p) {
        return cplx{magnitude ? magnitude(p) : std::abs(fn(p)), 0.0};
      }));
  if (gap > spec_.rich_tol * std::abs(fine) && gap > noise) {
    throw Error(ErrorCode::StepTooLarge, "halving the mass step changes E+ by a relative " +
                                             std::to_string(gap / std::max(std::abs(fine), 1e-300)));
  }
  return coarse;
}

void GaugeParameters::validate(double tol_gauge) const {
  if (!std::isfinite(lambda) || !std::isfinite(rho)) {
    throw Error(ErrorCode::ConfigInvalid, "gauge parameters must be finite");
  }
  if (std::abs(lambda - 1.0) < tol_gauge) {
    throw Error(ErrorCode::LandauGauge, "lambda = " + std::to_string(lambda) + " is the excluded Landau gauge");
  }
}

cplx dplus(const TestProfile& f, const TestProfile& g, const ShellQuadrature& quad) {
  return quad.shell_integral(0.0, [&](const FourVector& p) { return f.scalar(p) * std::conj(g.scalar(p)); });
}

cplx eplus(const TestProfile& f, const TestProfile& g, const ShellQuadrature& quad) {
  return quad.mass_derivative([&](const FourVector& p) { return f.scalar(p) * std::conj(g.scalar(p)); });
}

cplx two_point_A(int mu, int nu, const TestProfile& f, const TestProfile& g, const GaugeParameters& gp,
                 const ShellQuadrature& quad, const Tolerances& tol) {
  check_index(mu);
  check_index(nu);
  gp.validate(tol.gauge);
  cplx value = quad.shell_integral(0.0, [&](const FourVector& p) { return a_kernel(mu, nu, f, g, gp.rho, p); });
  if (gp.lambda != 0.0) {
    const double c = gp.lambda / (1.0 - gp.lambda);
    value += c * quad.mass_derivative([&](const FourVector& p) { return e_kernel(mu, nu, f, g, p); });
  }
  return value;
}

cplx two_point_F(int mu, int nu, int rho, int sigma, const TestProfile& f, const TestProfile& g,
                 const GaugeParameters& gp, const ShellQuadrature& quad, const Tolerances& tol) {
  for (int i : {mu, nu, rho, sigma}) check_index(i);
  gp.validate(tol.gauge);
  cplx value = quad.shell_integral(0.0, [&](const FourVector& p) {
    return f_combination(mu, nu, rho, sigma, p, [&](int a, int c) { return a_kernel(a, c, f, g, gp.rho, p); });
  });
  if (gp.lambda != 0.0) {
    const double c = gp.lambda / (1.0 - gp.lambda);
    value += c * quad.mass_derivative(
                     [&](const FourVector& p) {
                       return f_combination(mu, nu, rho, sigma, p,
                                            [&](int a, int b) { return e_kernel(a, b, f, g, p); });
                     },
                     [&](const FourVector& p) {
                       return std::abs(f_combination(mu, nu, rho, sigma, p, [&](int a, int b) {
                         return cplx{std::abs(e_kernel(a, b, f, g, p)), 0.0};
                       }));
                     });
  }
  return value;
}

double gauge_independence(int mu, int nu, int rho, int sigma, const TestProfile& f, const TestProfile& g,
                          const std::vector<GaugeParameters>& gps, const ShellQuadrature& quad, const Tolerances& tol) {
  for (const auto& gp : gps) gp.validate(tol.gauge);
  const cplx reference = two_point_F(mu, nu, rho, sigma, f, g, GaugeParameters::feynman(), quad, tol);
  double spread = 0.0;
  for (const auto& gp : gps)
    spread = std::max(spread, std::abs(two_point_F(mu, nu, rho, sigma, f, g, gp, quad, tol) - reference));
  return spread;
}

WitnessReport indefiniteness_witness(const std::vector<TestProfile>& family, const ShellQuadrature& quad,
                                     const Tolerances& tol) {
  if (family.empty()) throw Error(ErrorCode::ShapeMismatch, "witness needs at least one test function");
  const auto n = static_cast<Eigen::Index>(4 * family.size());
  WitnessReport r;
  r.gram.resize(n, n);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          r.gram(static_cast<Eigen::Index>(4 * i) + mu, static_cast<Eigen::Index>(4 * j) + nu) =
              two_point_A(mu, nu, family[i], family[j], GaugeParameters::feynman(), quad, tol);
  r.gram = hermitian_part(r.gram);
  r.signature = core::signature(r.gram, tol.null);
  r.pass = r.signature.n_minus >= 1;
  return r;
}

LocalityTable commutator_table(const TestProfile& f, const TestProfile& g, const QuadratureSpec& base, int levels,
                               const Tolerances& tol) {
  if (levels < 1) throw Error(ErrorCode::GridMismatch, "locality table needs at least one level");
  LocalityTable t;
  const FourVector sep = f.center - g.center;
  t.margin = sep.tail<3>().norm() - std::abs(sep(0));
  for (int l = 0; l < levels; ++l) {
    const ShellQuadrature quad(base.refined(l));
    const cplx fg = dplus(f, g, quad);
    const cplx gf = dplus(g, f, quad);
    LocalityLevel level;
    level.spec = quad.spec();
    level.commutator = std::abs(fg - gf);
    t.scale = std::abs(fg);
    t.levels.push_back(level);
  }
  for (auto& level : t.levels) level.relative = t.scale > 0.0 ? level.commutator / t.scale : 0.0;
  t.decays = true;
  for (std::size_t l = 1; l < t.levels.size(); ++l)
    if (t.levels[l].commutator > 0.5 * t.levels[l - 1].commutator) t.decays = false;
  t.pass = t.decays && t.levels.back().relative <= tol.loc;
  return t;
}

LocalityTable commutator_locality(const TestProfile& f, const TestProfile& g, const QuadratureSpec& base,
                                  int levels, const Tolerances& tol) {
  const FourVector sep = f.center - g.center;
  const double margin = sep.tail<3>().norm() - std::abs(sep(0));
  const double sigma = std::max(f.width, g.width);
  if (margin <= 4.0 * sigma) {
    throw Error(ErrorCode::NotSpacelike, "spacelike margin " + std::to_string(margin) + " is not above 4 sigma = " +
                                             std::to_string(4.0 * sigma));
  }
  return commutator_table(f, g, base, levels, tol);
}

CrossTable cross_module_table(int mu, int nu, const TestProfile& f, const TestProfile& g,
                              const std::vector<double>& spacings, double cutoff, const QuadratureSpec& quad,
                              double final_tol) {
  check_index(mu);
  check_index(nu);
  if (spacings.empty()) throw Error(ErrorCode::GridMismatch, "cross-module table needs at least one spacing");
  const cplx reference = two_point_A(mu, nu, f, g, GaugeParameters::feynman(), ShellQuadrature(quad));
  CrossTable table;
  for (double dk : spacings) {
    if (!(dk > 0.0)) throw Error(ErrorCode::GridMismatch, "lattice spacing must be positive");
    CrossLevel level;
    level.spacing = dk;
    level.k_max = static_cast<int>(std::floor(cutoff / dk + 1e-9));
    auto lattice = fock::MomentumLattice::cubic(kTwoPi / dk, level.k_max);
    level.modes = lattice.size();
    const auto dim_limit = static_cast<std::size_t>(fock::FockSpace::count_states(4 * lattice.size(), 1)) + 1;
    const fock::FockSpace space(std::move(lattice), 1, dim_limit);
    level.fock_dim = space.dim();
    const auto spectrum = fock::spectral_report(space, 0.0);
    level.min_mass_squared = spectrum.min_mass_squared;
    level.min_energy = spectrum.min_energy;
    const auto tf = fock::TestFunction::sample(space.lattice(), f);
    const auto tg = fock::TestFunction::sample(space.lattice(), g);
    const auto af = fock::field_A(space, mu, tf);
    const auto ag = fock::field_A(space, nu, tg);
    const Vector vac = Vector::Unit(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.vacuum()));
    const Vector v = ag.matrix * vac;
    const Vector w = af.matrix * v;
    level.fock_value = space.eta()(static_cast<Eigen::Index>(space.vacuum())) * w(static_cast<Eigen::Index>(space.vacuum()));
    level.quadrature_value = reference;
    level.relative_gap = std::abs(level.fock_value - reference) / std::max(std::abs(reference), 1e-300);
    table.levels.push_back(level);
  }
  table.monotone = true;
  for (std::size_t l = 1; l < table.levels.size(); ++l)
    if (table.levels[l].relative_gap >= table.levels[l - 1].relative_gap) table.monotone = false;
  table.pass = table.monotone && table.levels.back().relative_gap <= final_tol;
  return table;
}

}  // namespace kreinfield::twopoint
