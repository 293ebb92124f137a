#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kreinfield/borchers.hpp"
#include "kreinfield/errors.hpp"
#include "kreinfield/fock.hpp"
#include "oracles.hpp"

using namespace kreinfield;
using gns::Element;
using gns::Word;

namespace {

gns::Word random_word(std::mt19937_64& rng, int letters, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, letters - 1);
  Word w(static_cast<std::size_t>(len(rng)));
  for (int& l : w) l = letter(rng);
  return w;
}

Element random_element(std::mt19937_64& rng, int letters, int max_len, int terms) {
  std::normal_distribution<double> n01;
  Element e;
  for (int t = 0; t < terms; ++t) e.push_back({random_word(rng, letters, max_len), cplx(n01(rng), n01(rng))});
  return e;
}

// Hermitian functional with random entries: W_n(w) and W_n(w*) are set as a conjugate pair.
gns::WightmanFunctional random_hermitian_functional(std::mt19937_64& rng, int letters, int d_max) {
  std::normal_distribution<double> n01;
  gns::WightmanFunctional w(gns::AlgebraBasis(letters, d_max));
  const auto& basis = w.basis();
  for (std::size_t i = 1; i < basis.size(); ++i) {
    const Word word = basis.word(i);
    const Word star = gns::involution(basis, word);
    if (basis.index(star) < i) continue;
    const cplx v(n01(rng), n01(rng));
    w.set(word, star == word ? cplx(v.real(), 0.0) : v);
    if (star != word) w.set(star, std::conj(v));
  }
  return w;
}

// Letters A_mu(e_m / N_m) for every mode m and index mu.
gns::WightmanFunctional fock_functional(const fock::MomentumLattice& lattice, int n_max, int d_max,
                                        const std::vector<int>& mus = {0, 1, 2, 3}) {
  fock::FockSpace space(lattice, n_max);
  std::vector<fock::FieldOperator> letters;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const auto f = fock::TestFunction::mode_indicator(lattice, m, 1.0 / lattice.normalization(m));
    for (int mu : mus) letters.push_back(fock::field_A(space, mu, f));
  }
  return fock::wightman_from_fock(space, letters, d_max);
}

fock::MomentumLattice single_mode() { return fock::MomentumLattice::from_modes(2.0 * M_PI, {{0, 0, 1}}); }

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

}  // namespace

TEST(AlgebraBasis, SizeAndIndexing) {
  const gns::AlgebraBasis b(3, 4);
  EXPECT_EQ(b.size(), 1u + 3u + 9u + 27u + 81u);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index(b.word(i)), i);
  EXPECT_EQ(b.rank({2, 0}), 6u);
}

TEST(AlgebraBasis, StarMustBeInvolution) {
  EXPECT_NO_THROW(gns::AlgebraBasis(3, 2, {1, 0, 2}));
  EXPECT_EQ(code_of([] { gns::AlgebraBasis(3, 2, {1, 2, 0}); }), ErrorCode::ShapeMismatch);
}

TEST(Involution, Unit) {
  const gns::AlgebraBasis b(2, 3);
  EXPECT_TRUE(gns::involution(b, Word{}).empty());
}

TEST(Involution, ReversesAndStars) {
  const gns::AlgebraBasis b(3, 3, {1, 0, 2});
  EXPECT_EQ(gns::involution(b, Word{0, 2}), (Word{2, 1}));
  const Element e{{Word{0, 2}, cplx(1.0, 2.0)}};
  const Element s = gns::involution(b, e);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].word, (Word{2, 1}));
  EXPECT_EQ(s[0].coeff, cplx(1.0, -2.0));
}

TEST(Involution, IsAnInvolution) {
  std::mt19937_64 rng(5);
  const gns::AlgebraBasis b(4, 5, {1, 0, 3, 2});
  for (int t = 0; t < 500; ++t) {
    const Word w = random_word(rng, 4, 5);
    EXPECT_EQ(gns::involution(b, gns::involution(b, w)), w);
  }
}

TEST(Evaluate, Normalization) {
  const gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  EXPECT_EQ(gns::evaluate(w, {{Word{}, 1.0}}), cplx(1.0));
}

TEST(Evaluate, BasisWord) {
  gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  w.set({1, 0}, cplx(0.25, -3.0));
  EXPECT_EQ(gns::evaluate(w, {{Word{1, 0}, 1.0}}), cplx(0.25, -3.0));
  EXPECT_EQ(w.restriction(2)(2), cplx(0.25, -3.0));
}

TEST(Evaluate, Linearity) {
  std::mt19937_64 rng(6);
  const auto w = random_hermitian_functional(rng, 3, 3);
  for (int t = 0; t < 200; ++t) {
    const Element f = random_element(rng, 3, 3, 3);
    const Element g = random_element(rng, 3, 3, 2);
    const cplx s(0.5, -1.5);
    EXPECT_LT(std::abs(gns::evaluate(w, f + g) - gns::evaluate(w, f) - gns::evaluate(w, g)), 1e-12);
    EXPECT_LT(std::abs(gns::evaluate(w, s * f) - s * gns::evaluate(w, f)), 1e-12);
  }
}

TEST(Evaluate, DegreeOverflow) {
  const gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  EXPECT_EQ(code_of([&] { gns::evaluate(w, {{Word{0, 0, 1}, 1.0}}); }), ErrorCode::DegreeOverflow);
}

TEST(Hermiticity, HermitianTwoPointAccepted) {
  gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  w.set({0, 0}, 1.0);
  w.set({0, 1}, cplx(0.0, 0.5));
  w.set({1, 0}, cplx(0.0, -0.5));
  w.set({1, 1}, -1.0);
  EXPECT_TRUE(gns::hermiticity_check(w, 1e-10));
  w.set({0, 1}, cplx(0.0, 0.5 + 1e-3));
  EXPECT_FALSE(gns::hermiticity_check(w, 1e-10));
  EXPECT_EQ(code_of([&] { gns::gns_construct(w); }), ErrorCode::NotHermitian);
}

TEST(Hermiticity, FockGeneratedData) {
  const auto w = fock_functional(single_mode(), 2, 4);
  EXPECT_TRUE(gns::hermiticity_check(w, 1e-10));
}

TEST(GnsConstruct, VacuumOnly) {
  const gns::WightmanFunctional w(gns::AlgebraBasis(3, 4));
  const auto g = gns::gns_construct(w);
  ASSERT_EQ(g.dim(), 1u);
  EXPECT_NEAR(g.inner(g.vacuum(), g.vacuum()).real(), 1.0, 1e-14);
}

TEST(GnsConstruct, DiagonalTwoPoint) {
  gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  w.set({0, 0}, 1.0);
  w.set({1, 1}, -1.0);
  const auto g = gns::gns_construct(w);
  ASSERT_EQ(g.dim(), 3u);
  // direct Gram assembly over (1, e1, e2)
  Matrix m(3, 3);
  const std::vector<Word> words{{}, {0}, {1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = w.value(gns::concat(gns::involution(w.basis(), words[i]), words[j]));
  EXPECT_EQ(oracle::kernel_dim(m, 1e-12), 0);
  Matrix coords(3, 3);
  for (int i = 0; i < 3; ++i) coords.col(i) = g.coordinates({{words[static_cast<std::size_t>(i)], 1.0}});
  EXPECT_LT(oracle::max_abs(coords.adjoint() * g.space().gram() * coords - m), 1e-14);
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << 1.0, 1.0, -1.0;
  EXPECT_LT(oracle::max_abs(g.space().gram() - expected), 1e-14);
}

TEST(GnsConstruct, FockOneParticleGramIsMinusMetric) {
  const auto w = fock_functional(single_mode(), 2, 4);
  const auto g = gns::gns_construct(w);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const cplx v = g.inner(g.coordinates({{Word{mu}, 1.0}}), g.coordinates({{Word{nu}, 1.0}}));
      EXPECT_NEAR(std::abs(v - (-metric(mu, nu))), 0.0, 1e-10) << mu << nu;
    }
}

TEST(GnsConstruct, LeftIdealIsKernelOfWordGram) {
  const auto w = fock_functional(single_mode(), 2, 4);
  const auto g = gns::gns_construct(w);
  const Eigen::Index ker = oracle::kernel_dim(g.word_gram(), 1e-9);
  EXPECT_EQ(g.left_ideal().cols(), ker);
  EXPECT_GT(ker, 0);
  EXPECT_LT(oracle::max_abs(g.word_gram() * g.left_ideal()), 1e-10);
  EXPECT_EQ(g.dim() + static_cast<std::size_t>(ker), g.word_count());
}

TEST(FieldAction, OnVacuum) {
  gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  w.set({0, 0}, 1.0);
  w.set({1, 1}, -1.0);
  const auto g = gns::gns_construct(w);
  for (int k = 0; k < 2; ++k) {
    const Vector v = gns::field_action_coordinates(g, k, {{Word{}, 1.0}});
    EXPECT_LT((v - g.coordinates({{Word{k}, 1.0}})).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FieldAction, MatrixOneParticleColumn) {
  gns::WightmanFunctional w(gns::AlgebraBasis(2, 2));
  w.set({0, 0}, 1.0);
  w.set({1, 1}, -1.0);
  const auto g = gns::gns_construct(w);
  for (int k = 0; k < 2; ++k) {
    const Matrix a = gns::field_action_matrix(g, k);
    ASSERT_EQ(a.cols(), 1);
    EXPECT_LT((a.col(0) - Vector::Unit(3, 1 + k)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(FieldAction, TwoPointReconstruction) {
  const auto w = fock_functional(single_mode(), 2, 4);
  const auto g = gns::gns_construct(w);
  const Element omega{{Word{}, 1.0}};
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      const Element v = gns::field_action(g, k, gns::field_action(g, l, omega));
      EXPECT_LT(std::abs(g.inner(g.vacuum(), g.coordinates(v)) - w.value({k, l})), 1e-10);
    }
}

TEST(FieldAction, DegreeOverflowAtBoundary) {
  const auto w = fock_functional(single_mode(), 2, 4);
  const auto g = gns::gns_construct(w);
  EXPECT_EQ(code_of([&] { gns::field_action(g, 0, {{Word{1, 2}, 1.0}}); }), ErrorCode::DegreeOverflow);
}

TEST(GnsProperty, ReconstructionIdentity) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    const auto w = trial == 0 ? fock_functional(single_mode(), 2, 4) : random_hermitian_functional(rng, 2, 4);
    const auto g = gns::gns_construct(w);
    const auto& b = w.basis();
    double dev = 0.0;
    for (std::size_t i = 0; i < g.word_count(); ++i)
      for (std::size_t j = 0; j < g.word_count(); ++j) {
        const Word f = b.word(i), h = b.word(j);
        const cplx direct = w.value(gns::concat(gns::involution(b, f), h));
        dev = std::max(dev, std::abs(g.inner(g.coordinates({{f, 1.0}}), g.coordinates({{h, 1.0}})) - direct));
      }
    EXPECT_LT(dev, 1e-10) << "trial " << trial;
    EXPECT_EQ(core::signature(g.space().gram(), 1e-8).n_zero, 0u);
  }
}

TEST(GnsProperty, RepresentationUpToDegreeThree) {
  // timelike, transverse and longitudinal letters of one mode; words up to degree 3 need d_max = 6
  const auto w = fock_functional(single_mode(), 3, 6, {0, 1, 3});
  const auto g = gns::gns_construct(w);
  ASSERT_EQ(g.half_degree(), 3);
  const auto& b = w.basis();
  for (std::size_t i = 0; i < b.size_upto(3); ++i) {
    const Word word = b.word(i);
    Element v{{Word{}, 1.0}};
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = gns::field_action(g, *it, v);
    EXPECT_LT((g.coordinates(v) - g.coordinates({{word, 1.0}})).cwiseAbs().maxCoeff(), 1e-10);
  }
  // null elements of degree <= 2 stay null under the action, so it is well defined on classes
  const auto low = static_cast<Eigen::Index>(b.size_upto(2));
  const Matrix nulls = oracle::kernel(g.word_gram().leftCols(low), 1e-9);
  ASSERT_GT(nulls.cols(), 0);
  for (Eigen::Index c = 0; c < nulls.cols(); ++c) {
    Element e;
    for (Eigen::Index r = 0; r < low; ++r) e.push_back({b.word(static_cast<std::size_t>(r)), nulls(r, c)});
    EXPECT_LT(g.coordinates(e).norm(), 1e-9);
    for (int k = 0; k < 3; ++k) EXPECT_LT(g.coordinates(gns::field_action(g, k, e)).norm(), 1e-9);
  }
}

TEST(GnsProperty, FieldIsKreinHermitian) {
  std::mt19937_64 rng(9);
  const gns::AlgebraBasis star_basis(4, 4);
  const auto w = fock_functional(single_mode(), 2, 4);
  const auto g = gns::gns_construct(w);
  for (int t = 0; t < 50; ++t) {
    const Element psi = random_element(rng, 4, 1, 3);
    const Element phi = random_element(rng, 4, 1, 3);
    const int k = t % 4;
    const cplx lhs = g.inner(g.coordinates(gns::field_action(g, star_basis.star(k), psi)), g.coordinates(phi));
    const cplx rhs = g.inner(g.coordinates(psi), g.coordinates(gns::field_action(g, k, phi)));
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(WightmanFunctional, RelabelPermutesEntries) {
  std::mt19937_64 rng(10);
  const auto w = random_hermitian_functional(rng, 3, 3);
  const std::vector<int> perm{2, 0, 1};
  const auto p = w.relabelled(perm);
  for (std::size_t i = 0; i < w.basis().size(); ++i) {
    Word word = w.basis().word(i);
    const cplx v = w.value(word);
    for (int& l : word) l = perm[static_cast<std::size_t>(l)];
    EXPECT_EQ(p.value(word), v);
  }
  EXPECT_TRUE(gns::hermiticity_check(p, 1e-12));
}
