#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "kreinfield/krein.hpp"
#include "kreinfield/linalg.hpp"
#include "kreinfield/profile.hpp"

namespace kreinfield::twopoint {

struct QuadratureSpec {
  int polar = 24;    // Gauss-Legendre nodes in cos(theta)
  int azimuth = 48;  // uniform nodes in phi (even, so the grid is reflection closed)
  int radial = 64;   // Gauss-Legendre nodes in |p|
  double r_min = 0.1;
  double r_max = 10.0;
  double h = 1e-4;  // mass-squared step for E+
  double rich_tol = 1e-4;

  /// Doubles every node count `levels` times.
  QuadratureSpec refined(int levels) const;
};

/// Product grid over directions and radii; weights include r^2 but not the shell measure.
class ShellQuadrature {
 public:
  /// Throws GridMismatch on an unusable specification.
  explicit ShellQuadrature(const QuadratureSpec& spec);

  const QuadratureSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<Eigen::Vector3d>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// int d^3p / (2 omega (2 pi)^3) fn(p) with p = (sqrt(|p|^2 + m2), p).
  cplx shell_integral(double m2, const std::function<cplx(const FourVector&)>& fn) const;

  /// -d/dm^2 of shell_integral at m2 = 0 by central difference with step h, guarded by the
  /// h/2 Richardson comparison. Throws StepTooLarge. `magnitude` bounds |fn| before
  /// cancellation and sets the rounding floor of the comparison (|fn| by default).
  cplx mass_derivative(const std::function<cplx(const FourVector&)>& fn,
                       const std::function<double(const FourVector&)>& magnitude = {}) const;

 private:
  QuadratureSpec spec_;
  std::vector<Eigen::Vector3d> points_;
  std::vector<double> weights_;
};

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<RealVector, RealVector> gauss_legendre(int n, double a, double b);

struct GaugeParameters {
  double lambda = 0.0;
  double rho = 0.0;

  static GaugeParameters feynman() { return {}; }
  /// Throws LandauGauge when |lambda - 1| < tol_gauge.
  void validate(double tol_gauge) const;
};

/// D+ smeared with the scalar profiles: int dmu(p) f(p) conj(g(p)).
cplx dplus(const TestProfile& f, const TestProfile& g, const ShellQuadrature& quad);

/// E+ smeared with the scalar profiles.
cplx eplus(const TestProfile& f, const TestProfile& g, const ShellQuadrature& quad);

/// <A_mu(f) A_nu(g)> for the general covariant two-point function, using the mu-th
/// component of f and the nu-th component of g.
cplx two_point_A(int mu, int nu, const TestProfile& f, const TestProfile& g, const GaugeParameters& gp,
                 const ShellQuadrature& quad, const Tolerances& tol = {});

/// <F_{mu nu}(f) F_{rho sigma}(g)> with F_{mu nu} = d_nu A_mu - d_mu A_nu.
cplx two_point_F(int mu, int nu, int rho, int sigma, const TestProfile& f, const TestProfile& g,
                 const GaugeParameters& gp, const ShellQuadrature& quad, const Tolerances& tol = {});

/// max over gps of |two_point_F(gp) - two_point_F(Feynman)|.
double gauge_independence(int mu, int nu, int rho, int sigma, const TestProfile& f, const TestProfile& g,
                          const std::vector<GaugeParameters>& gps, const ShellQuadrature& quad,
                          const Tolerances& tol = {});

struct WitnessReport {
  Matrix gram;  // rows/cols ordered (profile i, index mu) with mu fastest
  core::Signature signature;
  bool pass = false;  // n_minus >= 1
};

/// Feynman-gauge Gram of A_mu(f_i) over all mu and every profile of the family.
WitnessReport indefiniteness_witness(const std::vector<TestProfile>& family, const ShellQuadrature& quad,
                                     const Tolerances& tol = {});

struct LocalityLevel {
  QuadratureSpec spec;
  double commutator = 0.0;  // |D(f,g)| = |dplus(f,g) - dplus(g,f)|
  double relative = 0.0;    // commutator / scale
};

struct LocalityTable {
  std::vector<LocalityLevel> levels;
  double scale = 0.0;  // |dplus(f,g)| at the finest level
  double margin = 0.0;  // spatial minus temporal separation of the centers
  bool decays = false;  // each level at least halves the previous one
  bool pass = false;    // decays and final relative <= loc_tol
};

/// Smeared commutator at each of `levels` successively doubled grids starting from `base`.
LocalityTable commutator_table(const TestProfile& f, const TestProfile& g, const QuadratureSpec& base, int levels,
                               const Tolerances& tol = {});

/// commutator_table after checking a spacelike margin above 4 sigma. Throws NotSpacelike.
LocalityTable commutator_locality(const TestProfile& f, const TestProfile& g, const QuadratureSpec& base,
                                  int levels, const Tolerances& tol = {});

struct CrossLevel {
  double spacing = 0.0;  // lattice momentum spacing 2 pi / L
  int k_max = 0;
  std::size_t modes = 0;
  std::size_t fock_dim = 0;
  cplx fock_value;
  cplx quadrature_value;
  double relative_gap = 0.0;
  double min_mass_squared = 0.0;  // over the Fock basis of this level
  double min_energy = 0.0;
};

struct CrossTable {
  std::vector<CrossLevel> levels;
  bool monotone = false;
  bool pass = false;  // monotone and final gap <= final_tol
};

/// Feynman-gauge <A_mu(f) A_nu(g)> from Fock mode sums on cubic lattices with the given
/// spacings (cutoff |k_i| <= cutoff) against the quadrature value.
CrossTable cross_module_table(int mu, int nu, const TestProfile& f, const TestProfile& g,
                              const std::vector<double>& spacings, double cutoff, const QuadratureSpec& quad,
                              double final_tol);

}  // namespace kreinfield::twopoint
