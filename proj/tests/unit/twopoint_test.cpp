#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kreinfield/errors.hpp"
#include "kreinfield/twopoint.hpp"
#include "oracles.hpp"

using namespace kreinfield;
using namespace kreinfield::twopoint;

namespace {

QuadratureSpec full_line(int polar = 16, int azimuth = 32, int radial = 96) {
  return {polar, azimuth, radial, 0.0, 10.0, 1e-4, 1e-4};
}

QuadratureSpec away_from_origin(int radial = 128) { return {16, 32, radial, 0.1, 10.0, 1e-4, 1e-4}; }

TestProfile gaussian(double t, double x, double y, double z, double width) {
  return TestProfile::gaussian(FourVector(t, x, y, z), width);
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no kreinfield::Error thrown";
  return ErrorCode::ParseError;
}

const std::vector<GaugeParameters> kGauges{{0.0, 0.0}, {0.5, 2.0}, {-3.0, 1.0}};

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto [x, w] = gauss_legendre(8, -1.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += w(i) * std::pow(x(i), 15);
  EXPECT_NEAR(s, (std::pow(2.0, 16) - 1.0) / 16.0, 1e-9);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(x(i) - 0.5, 0.5 - x(7 - i));
}

TEST(ShellQuadrature, GridMismatch) {
  EXPECT_EQ(code_of([] { ShellQuadrature({4, 7, 8, 0.1, 10.0, 1e-4, 1e-4}); }), ErrorCode::GridMismatch);
  EXPECT_EQ(code_of([] { ShellQuadrature({4, 8, 8, 2.0, 1.0, 1e-4, 1e-4}); }), ErrorCode::GridMismatch);
  EXPECT_EQ(code_of([] { ShellQuadrature({0, 8, 8, 0.1, 1.0, 1e-4, 1e-4}); }), ErrorCode::GridMismatch);
  const ShellQuadrature q(full_line(4, 8, 8));
  const auto f = gaussian(0, 0, 0, 0, 1.0);
  EXPECT_EQ(code_of([&] { eplus(f, f, q); }), ErrorCode::GridMismatch);
}

TEST(ShellQuadrature, ReflectionClosedPositiveWeights) {
  const ShellQuadrature q(QuadratureSpec{6, 8, 5, 0.1, 3.0, 1e-4, 1e-4});
  for (double w : q.weights()) EXPECT_GT(w, 0.0);
  for (const auto& p : q.points()) {
    bool found = false;
    for (const auto& r : q.points()) found = found || (p + r).norm() < 1e-12;
    EXPECT_TRUE(found);
  }
}

TEST(Dplus, GaussianClosedForm) {
  for (double sigma : {0.7, 1.0, 1.5}) {
    const auto f = gaussian(0, 0, 0, 0, sigma);
    const cplx v = dplus(f, f, ShellQuadrature(full_line()));
    EXPECT_NEAR(v.real(), 1.0 / (8.0 * M_PI * M_PI * sigma * sigma), 1e-10);
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(Dplus, ShellIndicatorPositive) {
  const auto s = TestProfile::shell(2.0, 0.5);
  const QuadratureSpec spec{8, 16, 256, 1.5, 2.5, 1e-4, 1e-4};
  const cplx v = dplus(s, s, ShellQuadrature(spec));
  // radial integral (1 / 4 pi^2) int r |s(r)|^2 dr
  const double ref = oracle::adaptive_simpson(
                         [&](double r) { return r * std::norm(s.scalar(FourVector(r, 0.0, 0.0, r))); }, 1.5, 2.5,
                         1e-14) /
                     (4.0 * M_PI * M_PI);
  EXPECT_GT(v.real(), 0.0);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  EXPECT_NEAR(v.real(), ref, 1e-9 * ref);
}

TEST(Dplus, Hermitian) {
  const ShellQuadrature q(full_line());
  const auto f = gaussian(0.3, 0.1, -0.4, 0.2, 1.0);
  const auto g = gaussian(-0.5, 0.6, 0.0, 1.0, 0.8);
  EXPECT_LT(std::abs(dplus(f, g, q) - std::conj(dplus(g, f, q))), 1e-15);
}

TEST(Eplus, MeasureDerivativeClosedForm) {
  for (double sigma : {0.8, 1.2}) {
    auto f = gaussian(0, 0, 0, 0, sigma);
    f.time_width = 0.0;  // amplitude independent of p^0, so only the measure moves with m^2
    const double ref =
        oracle::adaptive_simpson([&](double r) { return std::exp(-sigma * sigma * r * r / 2.0) / r; }, 0.1, 10.0,
                                 1e-13) /
        (8.0 * M_PI * M_PI);
    auto spec = away_from_origin(256);
    const double e1 = std::abs(eplus(f, f, ShellQuadrature(spec)).real() - ref);
    spec.h *= 0.5;
    const double e2 = std::abs(eplus(f, f, ShellQuadrature(spec)).real() - ref);
    EXPECT_LT(e1, 1e-5 * ref);
    // second order in the mass step
    EXPECT_LT(e2, e1 / 3.0);
  }
}

TEST(Eplus, Hermitian) {
  const ShellQuadrature q(away_from_origin());
  const auto f = gaussian(0.3, 0.1, -0.4, 0.2, 1.0);
  const auto g = gaussian(-0.5, 0.6, 0.0, 1.0, 0.8);
  EXPECT_LT(std::abs(eplus(f, g, q) - std::conj(eplus(g, f, q))), 1e-12 * std::abs(eplus(f, g, q)));
}

TEST(Eplus, HalvingStepConverges) {
  auto spec = away_from_origin();
  const auto f = gaussian(0.2, 0.0, 0.1, 0.0, 1.0);
  const auto g = gaussian(0.0, 0.3, 0.0, 0.0, 1.0);
  const cplx e1 = eplus(f, g, ShellQuadrature(spec));
  spec.h *= 0.5;
  const cplx e2 = eplus(f, g, ShellQuadrature(spec));
  EXPECT_LT(std::abs(e1 - e2) / std::abs(e2), 1e-4);
}

TEST(Eplus, StepTooLarge) {
  const QuadratureSpec spec{8, 16, 32, 1.0, 4.0, 0.45, 1e-4};
  const auto f = gaussian(0, 0, 0, 0, 1.0);
  EXPECT_EQ(code_of([&] { eplus(f, f, ShellQuadrature(spec)); }), ErrorCode::StepTooLarge);
}

TEST(TwoPointA, FeynmanDiagonal) {
  const ShellQuadrature q(full_line());
  const auto f = gaussian(0.1, 0.0, 0.2, 0.0, 1.0);
  const auto g = gaussian(0.0, -0.3, 0.0, 0.4, 1.0);
  const cplx d = dplus(f, g, q);
  for (int mu = 0; mu < 4; ++mu)
    EXPECT_LT(std::abs(two_point_A(mu, mu, f, g, GaugeParameters::feynman(), q) - (-metric(mu, mu)) * d),
              1e-15);
  EXPECT_EQ(two_point_A(0, 2, f, g, GaugeParameters::feynman(), q), cplx(0.0));
}

TEST(TwoPointA, LandauRejected) {
  const ShellQuadrature q(away_from_origin(16));
  const auto f = gaussian(0, 0, 0, 0, 1.0);
  EXPECT_EQ(code_of([&] { two_point_A(0, 0, f, f, {1.0, 0.0}, q); }), ErrorCode::LandauGauge);
  EXPECT_EQ(code_of([&] { two_point_A(0, 0, f, f, {1.0 + 1e-7, 0.0}, q); }), ErrorCode::LandauGauge);
  EXPECT_EQ(code_of([&] { two_point_F(0, 1, 0, 1, f, f, {1.0, 3.0}, q); }), ErrorCode::LandauGauge);
  EXPECT_NO_THROW(two_point_A(0, 0, f, f, {1.0 + 1e-5, 0.0}, q));
}

TEST(TwoPointA, RhoTermIsGradient) {
  // the rho part is -rho p_a p_c times the scalar kernel
  const ShellQuadrature q(full_line(8, 16, 64));
  const auto f = gaussian(0.1, 0.0, 0.0, 0.0, 1.0);
  const cplx a0 = two_point_A(1, 3, f, f, {0.0, 0.0}, q);
  const cplx a2 = two_point_A(1, 3, f, f, {0.0, 2.0}, q);
  const cplx direct = q.shell_integral(0.0, [&](const FourVector& p) {
    return -2.0 * p(1) * p(3) * f.scalar(p) * std::conj(f.scalar(p));
  });
  EXPECT_LT(std::abs(a2 - a0 - direct), 1e-15);
}

TEST(TwoPointA, CrossModuleAgainstLattice) {
  const auto f = gaussian(0, 0, 0, 0, 1.0);
  const QuadratureSpec quad{32, 64, 256, 0.0, 10.0, 1e-4, 1e-4};
  const auto t = cross_module_table(0, 0, f, f, {0.5, 0.25}, 3.5, quad, 1e-2);
  ASSERT_EQ(t.levels.size(), 2u);
  EXPECT_GT(t.levels[0].relative_gap, t.levels[1].relative_gap);
  EXPECT_TRUE(t.monotone);
  EXPECT_NEAR(t.levels[0].quadrature_value.real(), -1.0 / (8.0 * M_PI * M_PI), 1e-10);
  for (const auto& l : t.levels) EXPECT_GE(l.min_mass_squared, -1e-12);
}

TEST(TwoPointF, DiagonalIndexVanishes) {
  const ShellQuadrature q(away_from_origin(32));
  const auto f = gaussian(0.1, 0.2, 0, 0, 1.0);
  for (int mu = 0; mu < 4; ++mu)
    for (int rho = 0; rho < 4; ++rho)
      for (const auto& gp : kGauges)
        EXPECT_LT(std::abs(two_point_F(mu, mu, rho, (rho + 1) % 4, f, f, gp, q)), 1e-15);
}

TEST(TwoPointF, GaugeIndependenceAllPairs) {
  const ShellQuadrature q(QuadratureSpec{8, 16, 32, 0.1, 10.0, 1e-4, 1e-4});
  const auto f = gaussian(0.0, 0.0, 0.0, 0.0, 1.0);
  const auto g = gaussian(0.3, -0.2, 0.1, 0.4, 0.8);
  int pairs = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sigma = rho + 1; sigma < 4; ++sigma) {
          EXPECT_LE(gauge_independence(mu, nu, rho, sigma, f, g, kGauges, q), 1e-10);
          ++pairs;
        }
  EXPECT_EQ(pairs, 36);
}

TEST(TwoPointF, TransverseComponentNonzero) {
  const ShellQuadrature q(full_line());
  const auto f = gaussian(0.1, 0.2, 0.0, -0.1, 1.0);
  const auto g = gaussian(0.0, -0.3, 0.2, 0.0, 0.9);
  EXPECT_GT(std::abs(two_point_F(1, 2, 1, 2, f, g, GaugeParameters::feynman(), q)), 1e-4);
}

TEST(Witness, SharedProfileSignature) {
  const ShellQuadrature q(full_line());
  const auto r = indefiniteness_witness({gaussian(0, 0, 0, 0, 1.0)}, q);
  const auto in = oracle::inertia(r.gram, 1e-8);
  EXPECT_EQ(in.plus, 3u);
  EXPECT_EQ(in.zero, 0u);
  EXPECT_EQ(in.minus, 1u);
  EXPECT_EQ(r.signature, (core::Signature{3, 0, 1}));
  EXPECT_TRUE(r.pass);
}

TEST(Witness, DisjointShellsGiveOneNegativePerBlock) {
  const QuadratureSpec spec{8, 16, 128, 0.5, 6.0, 1e-4, 1e-4};
  const std::vector<TestProfile> family{TestProfile::shell(1.5, 0.5), TestProfile::shell(3.0, 0.5),
                                        TestProfile::shell(4.5, 0.5)};
  const auto r = indefiniteness_witness(family, ShellQuadrature(spec));
  EXPECT_EQ(r.signature.n_minus, 3u);
  EXPECT_EQ(oracle::inertia(r.gram, 1e-12).minus, 3u);
  EXPECT_EQ(oracle::max_abs(r.gram.block(0, 4, 4, 4)), 0.0);
}

TEST(Witness, SpatialComponentsArePositive) {
  auto f = gaussian(0, 0, 0, 0, 1.0);
  auto g = gaussian(0.2, 0.5, 0, 0, 0.8);
  for (auto* p : {&f, &g}) p->components[0] = 0.0;
  auto h = gaussian(-0.1, 0, 0.3, 0.2, 1.2);
  auto k = gaussian(0.0, 0, 0, -0.4, 1.0);
  for (auto* p : {&h, &k}) p->components[0] = 0.0;
  const auto r = indefiniteness_witness({f, g, h, k}, ShellQuadrature(full_line()));
  EXPECT_EQ(r.signature.n_minus, 0u);
  EXPECT_FALSE(r.pass);
}

TEST(Locality, NotSpacelikeRejected) {
  const auto f = gaussian(1.0, 0, 0, 4.5, 1.0);
  const auto g = gaussian(0, 0, 0, 0, 1.0);
  EXPECT_EQ(code_of([&] { commutator_locality(f, g, full_line(4, 8, 8), 2); }), ErrorCode::NotSpacelike);
}

TEST(Locality, CoincidentCentersCommute) {
  const auto f = gaussian(0.3, 0.1, 0, 0, 1.0);
  const auto t = commutator_table(f, f, full_line(4, 8, 8), 2);
  for (const auto& l : t.levels) EXPECT_EQ(l.commutator, 0.0);
}

TEST(Locality, SpacelikeDecaysTimelikeDoesNot) {
  const QuadratureSpec base = full_line(4, 8, 8);
  const auto origin = gaussian(0, 0, 0, 0, 1.0);
  const auto t = commutator_locality(gaussian(0.5, 0, 0, 6.5, 1.0), origin, base, 3);
  EXPECT_NEAR(t.margin, 6.0, 1e-15);
  EXPECT_TRUE(t.decays);
  EXPECT_LE(t.levels.back().relative, 1e-3);
  EXPECT_TRUE(t.pass);
  const auto c = commutator_table(gaussian(6.5, 0, 0, 5.0, 1.0), origin, base, 3);
  EXPECT_LT(c.margin, 0.0);
  EXPECT_GT(c.levels.back().relative, 0.1);
  EXPECT_FALSE(c.pass);
}

TEST(TwoPointProperty, Hermiticity) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> n01;
  const ShellQuadrature q(QuadratureSpec{8, 16, 32, 0.1, 10.0, 1e-4, 1e-4});
  for (int t = 0; t < 6; ++t) {
    const auto f = gaussian(0.3 * n01(rng), 0.3 * n01(rng), 0.3 * n01(rng), 0.3 * n01(rng), 1.0);
    const auto g = gaussian(0.3 * n01(rng), 0.3 * n01(rng), 0.3 * n01(rng), 0.3 * n01(rng), 0.8);
    for (const auto& gp : kGauges)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          const cplx a = two_point_A(mu, nu, f, g, gp, q);
          const cplx b = two_point_A(nu, mu, g, f, gp, q);
          EXPECT_LT(std::abs(a - std::conj(b)), 1e-10 * std::max(1.0, std::abs(a)));
        }
  }
}

TEST(TwoPointProperty, TranslationInvariance) {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> n01;
  const ShellQuadrature q(QuadratureSpec{8, 16, 32, 0.1, 10.0, 1e-4, 1e-4});
  const auto f = gaussian(0.1, 0.2, 0.0, -0.2, 1.0);
  const auto g = gaussian(-0.3, 0.0, 0.4, 0.1, 1.0);
  for (int t = 0; t < 5; ++t) {
    const FourVector a(n01(rng), n01(rng), n01(rng), n01(rng));
    for (const auto& gp : kGauges) {
      const cplx v0 = two_point_A(0, 3, f, g, gp, q);
      const cplx v1 = two_point_A(0, 3, f.translated(a), g.translated(a), gp, q);
      EXPECT_LT(std::abs(v1 - v0), 1e-10);
    }
  }
}

TEST(TwoPointProperty, NegativeFrequencySmearingVanishes) {
  const ShellQuadrature q(QuadratureSpec{8, 16, 32, 0.1, 10.0, 1e-4, 1e-4});
  auto f = gaussian(0.1, 0.2, 0.0, -0.2, 1.0);
  f.negative_frequency_only = true;
  const auto g = gaussian(0, 0, 0, 0, 1.0);
  EXPECT_EQ(dplus(f, g, q), cplx(0.0));
  for (const auto& gp : kGauges) EXPECT_EQ(two_point_A(0, 0, f, g, gp, q), cplx(0.0));
}
