#pragma once

#include <cstddef>
#include <vector>

#include "kreinfield/krein.hpp"
#include "kreinfield/linalg.hpp"

namespace kreinfield::gns {

/// A word e_{l1} (x) ... (x) e_{ln} of degree-1 basis letters. The empty word is the unit.
using Word = std::vector<int>;

struct Term {
  Word word;
  cplx coeff{1.0, 0.0};
};

/// Finite linear combination of words.
using Element = std::vector<Term>;

/// Truncated free unital tensor algebra over `letters` abstract test functions.
///
/// Words of degree n are stored at offset(n) + rank, where rank reads the
/// letters as digits in base `letters` with the first letter most significant.
class AlgebraBasis {
 public:
  AlgebraBasis(int letters, int max_degree, std::vector<int> star = {});

  int letters() const noexcept { return letters_; }
  int max_degree() const noexcept { return max_degree_; }

  /// Number of words of degree <= max_degree.
  std::size_t size() const noexcept { return offsets_.back(); }
  /// Number of words of degree <= degree.
  std::size_t size_upto(int degree) const;
  std::size_t words_of_degree(int degree) const;
  std::size_t offset(int degree) const { return offsets_.at(static_cast<std::size_t>(degree)); }

  std::size_t index(const Word& w) const;
  Word word(std::size_t index) const;
  int degree(std::size_t index) const;

  /// Rank of a word among the words of its own degree.
  std::size_t rank(const Word& w) const;
  Word unrank(int degree, std::size_t rank) const;

  int star(int letter) const { return star_.at(static_cast<std::size_t>(letter)); }
  const std::vector<int>& star_map() const noexcept { return star_; }

 private:
  int letters_;
  int max_degree_;
  std::vector<int> star_;
  std::vector<std::size_t> offsets_;  // offsets_[n] = sum_{j<n} letters^j, size max_degree+2
};

/// (f1 (x) ... (x) fn)* = fn* (x) ... (x) f1*.
Word involution(const AlgebraBasis& basis, const Word& w);
/// Involution extended antilinearly (coefficients conjugated).
Element involution(const AlgebraBasis& basis, const Element& e);

Element tensor(const Element& a, const Element& b);
Element operator+(const Element& a, const Element& b);
Element operator*(cplx s, const Element& e);

Word concat(const Word& a, const Word& b);
int degree(const Element& e);

/// Normalized functional on the truncated algebra, stored as the restrictions W_n.
class WightmanFunctional {
 public:
  /// W_0 = 1, every other W_n = 0.
  explicit WightmanFunctional(AlgebraBasis basis);

  const AlgebraBasis& basis() const noexcept { return basis_; }
  int max_degree() const noexcept { return basis_.max_degree(); }
  int letters() const noexcept { return basis_.letters(); }

  cplx value(const Word& w) const;
  void set(const Word& w, cplx v);

  /// Flat array of W_n in rank order (size letters^n).
  const Vector& restriction(int n) const { return w_.at(static_cast<std::size_t>(n)); }
  Vector& restriction(int n) { return w_.at(static_cast<std::size_t>(n)); }

  bool hermitian_flag() const noexcept { return hermitian_; }
  void set_hermitian_flag(bool flag) noexcept { hermitian_ = flag; }

  /// Same data with letters relabelled: new letter perm[k] carries old letter k.
  WightmanFunctional relabelled(const std::vector<int>& perm) const;

 private:
  AlgebraBasis basis_;
  std::vector<Vector> w_;
  bool hermitian_ = true;
};

/// Linear extension of W over the terms. Throws DegreeOverflow.
cplx evaluate(const WightmanFunctional& w, const Element& e);

/// W(f*) == conj(W(f)) on every basis word to `tol`.
bool hermiticity_check(const WightmanFunctional& w, double tol);
double hermiticity_defect(const WightmanFunctional& w);

/// GNS space of a Hermitian functional, truncated to words of degree <= floor(d_max/2)
/// so that every pairing W(f* (x) h) is available.
class GnsSpace {
 public:
  const AlgebraBasis& basis() const noexcept { return basis_; }
  /// Highest word degree that carries GNS coordinates.
  int half_degree() const noexcept { return half_; }
  /// Number of words with degree <= half_degree().
  std::size_t word_count() const noexcept { return static_cast<std::size_t>(word_gram_.rows()); }

  /// M[f][h] = W(f* (x) h) over all retained words.
  const Matrix& word_gram() const noexcept { return word_gram_; }
  /// Columns: orthonormal word-space basis of a complement of the left ideal.
  const Matrix& complement() const noexcept { return complement_; }
  const core::IndefiniteSpace& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.dim(); }
  const Vector& vacuum() const noexcept { return vacuum_; }

  /// Word-space vector of an element (degree <= half_degree()).
  Vector word_vector(const Element& e) const;
  /// Quotient coordinates of the class of `e`.
  Vector coordinates(const Element& e) const;
  Vector coordinates_of_word_vector(const Vector& v) const;

  /// Numerical left ideal: word-space basis of the kernel of M.
  const Matrix& left_ideal() const noexcept { return ideal_; }

  cplx inner(const Vector& x, const Vector& y) const { return space_.inner(x, y); }

 private:
  friend GnsSpace gns_construct(const WightmanFunctional&, const Tolerances&);
  GnsSpace(AlgebraBasis basis, int half, Matrix word_gram, Matrix complement, Matrix ideal,
           core::IndefiniteSpace space, Vector vacuum);

  AlgebraBasis basis_;
  int half_;
  Matrix word_gram_;
  Matrix complement_;
  Matrix ideal_;
  core::IndefiniteSpace space_;
  Vector vacuum_;
};

/// Throws NotHermitian when the functional fails hermiticity_check(tol.eq).
GnsSpace gns_construct(const WightmanFunctional& w, const Tolerances& tol = {});

/// Representative of [e_k (x) f]; throws DegreeOverflow when deg f >= half_degree().
Element field_action(const GnsSpace& g, int letter, const Element& f);

/// Quotient coordinates of [e_k (x) f].
Vector field_action_coordinates(const GnsSpace& g, int letter, const Element& f);

/// Matrix whose column w holds the quotient coordinates of [e_k (x) w], for every
/// word w with degree < half_degree() (in basis order).
Matrix field_action_matrix(const GnsSpace& g, int letter);

}  // namespace kreinfield::gns
