#include "kreinfield/borchers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kreinfield/errors.hpp"

namespace kreinfield::gns {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

AlgebraBasis::AlgebraBasis(int letters, int max_degree, std::vector<int> star)
    : letters_(letters), max_degree_(max_degree), star_(std::move(star)) {
  if (letters < 1 || max_degree < 0) {
    throw Error(ErrorCode::ShapeMismatch, "algebra needs at least one letter and a nonnegative degree cap");
  }
  if (star_.empty()) {
    star_.resize(static_cast<std::size_t>(letters));
    std::iota(star_.begin(), star_.end(), 0);
  }
  if (star_.size() != static_cast<std::size_t>(letters)) {
    throw Error(ErrorCode::ShapeMismatch, "star map must list one image per letter");
  }
  for (int k = 0; k < letters; ++k) {
    const int s = star_[static_cast<std::size_t>(k)];
    if (s < 0 || s >= letters || star_[static_cast<std::size_t>(s)] != k) {
      throw Error(ErrorCode::ShapeMismatch, "star map is not an involution on letters");
    }
  }
  offsets_.resize(static_cast<std::size_t>(max_degree) + 2);
  offsets_[0] = 0;
  for (int n = 0; n <= max_degree; ++n)
    offsets_[static_cast<std::size_t>(n) + 1] = offsets_[static_cast<std::size_t>(n)] + ipow(static_cast<std::size_t>(letters), n);
}

std::size_t AlgebraBasis::size_upto(int degree) const {
  if (degree < 0) return 0;
  return offsets_.at(static_cast<std::size_t>(std::min(degree, max_degree_)) + 1);
}

std::size_t AlgebraBasis::words_of_degree(int degree) const {
  return ipow(static_cast<std::size_t>(letters_), degree);
}

std::size_t AlgebraBasis::rank(const Word& w) const {
  std::size_t r = 0;
  for (int l : w) {
    if (l < 0 || l >= letters_) throw Error(ErrorCode::ShapeMismatch, "letter out of range");
    r = r * static_cast<std::size_t>(letters_) + static_cast<std::size_t>(l);
  }
  return r;
}

Word AlgebraBasis::unrank(int degree, std::size_t rank) const {
  Word w(static_cast<std::size_t>(degree));
  for (int i = degree - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<int>(rank % static_cast<std::size_t>(letters_));
    rank /= static_cast<std::size_t>(letters_);
  }
  return w;
}

std::size_t AlgebraBasis::index(const Word& w) const {
  const int n = static_cast<int>(w.size());
  if (n > max_degree_) {
    throw Error(ErrorCode::DegreeOverflow, "word of degree " + std::to_string(n) + " exceeds cap " +
                                               std::to_string(max_degree_));
  }
  return offsets_[static_cast<std::size_t>(n)] + rank(w);
}

int AlgebraBasis::degree(std::size_t index) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

Word AlgebraBasis::word(std::size_t index) const {
  const int n = degree(index);
  return unrank(n, index - offsets_[static_cast<std::size_t>(n)]);
}

Word involution(const AlgebraBasis& basis, const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = basis.star(l);
  return out;
}

Element involution(const AlgebraBasis& basis, const Element& e) {
  Element out;
  out.reserve(e.size());
  for (const Term& t : e) out.push_back({involution(basis, t.word), std::conj(t.coeff)});
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Element tensor(const Element& a, const Element& b) {
  Element out;
  out.reserve(a.size() * b.size());
  for (const Term& x : a)
    for (const Term& y : b) out.push_back({concat(x.word, y.word), x.coeff * y.coeff});
  return out;
}

Element operator+(const Element& a, const Element& b) {
  Element out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Element operator*(cplx s, const Element& e) {
  Element out(e);
  for (Term& t : out) t.coeff *= s;
  return out;
}

int degree(const Element& e) {
  int d = 0;
  for (const Term& t : e)
    if (t.coeff != cplx{0.0, 0.0}) d = std::max(d, static_cast<int>(t.word.size()));
  return d;
}

WightmanFunctional::WightmanFunctional(AlgebraBasis basis) : basis_(std::move(basis)) {
  for (int n = 0; n <= basis_.max_degree(); ++n)
    w_.push_back(Vector::Zero(static_cast<Eigen::Index>(basis_.words_of_degree(n))));
  w_[0](0) = 1.0;
}

cplx WightmanFunctional::value(const Word& w) const {
  const int n = static_cast<int>(w.size());
  if (n > basis_.max_degree()) {
    throw Error(ErrorCode::DegreeOverflow, "W_" + std::to_string(n) + " is beyond the truncation");
  }
  return w_[static_cast<std::size_t>(n)](static_cast<Eigen::Index>(basis_.rank(w)));
}

void WightmanFunctional::set(const Word& w, cplx v) {
  const int n = static_cast<int>(w.size());
  if (n > basis_.max_degree()) {
    throw Error(ErrorCode::DegreeOverflow, "W_" + std::to_string(n) + " is beyond the truncation");
  }
  w_[static_cast<std::size_t>(n)](static_cast<Eigen::Index>(basis_.rank(w))) = v;
}

WightmanFunctional WightmanFunctional::relabelled(const std::vector<int>& perm) const {
  const int b = basis_.letters();
  if (perm.size() != static_cast<std::size_t>(b)) throw Error(ErrorCode::ShapeMismatch, "permutation length");
  std::vector<int> star(static_cast<std::size_t>(b));
  for (int k = 0; k < b; ++k) star[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = perm[static_cast<std::size_t>(basis_.star(k))];
  WightmanFunctional out(AlgebraBasis(b, basis_.max_degree(), star));
  out.hermitian_ = hermitian_;
  for (int n = 0; n <= basis_.max_degree(); ++n) {
    for (std::size_t r = 0; r < basis_.words_of_degree(n); ++r) {
      Word w = basis_.unrank(n, r);
      const cplx v = w_[static_cast<std::size_t>(n)](static_cast<Eigen::Index>(r));
      for (int& l : w) l = perm[static_cast<std::size_t>(l)];
      out.set(w, v);
    }
  }
  return out;
}

cplx evaluate(const WightmanFunctional& w, const Element& e) {
  cplx sum{0.0, 0.0};
  for (const Term& t : e) sum += t.coeff * w.value(t.word);
  return sum;
}

double hermiticity_defect(const WightmanFunctional& w) {
  const auto& basis = w.basis();
  double defect = 0.0;
  for (int n = 0; n <= basis.max_degree(); ++n) {
    for (std::size_t r = 0; r < basis.words_of_degree(n); ++r) {
      const Word word = basis.unrank(n, r);
      defect = std::max(defect, std::abs(w.value(involution(basis, word)) - std::conj(w.value(word))));
    }
  }
  return defect;
}

bool hermiticity_check(const WightmanFunctional& w, double tol) { return hermiticity_defect(w) <= tol; }

GnsSpace::GnsSpace(AlgebraBasis basis, int half, Matrix word_gram, Matrix complement, Matrix ideal,
                   core::IndefiniteSpace space, Vector vacuum)
    : basis_(std::move(basis)),
      half_(half),
      word_gram_(std::move(word_gram)),
      complement_(std::move(complement)),
      ideal_(std::move(ideal)),
      space_(std::move(space)),
      vacuum_(std::move(vacuum)) {}

GnsSpace gns_construct(const WightmanFunctional& w, const Tolerances& tol) {
  const double defect = hermiticity_defect(w);
  if (defect > tol.eq) {
    throw Error(ErrorCode::NotHermitian, "W(f*) differs from conj W(f) by " + std::to_string(defect));
  }
  const auto& basis = w.basis();
  const int half = basis.max_degree() / 2;
  const auto m = static_cast<Eigen::Index>(basis.size_upto(half));

  Matrix gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Word fstar = involution(basis, basis.word(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = w.value(concat(fstar, basis.word(static_cast<std::size_t>(j))));
  }
  gram = hermitian_part(gram);

  const HermitianEigen e = hermitian_eigen(gram);
  std::vector<Eigen::Index> keep;
  std::vector<Eigen::Index> drop;
  for (Eigen::Index i = 0; i < m; ++i) (std::abs(e.values(i)) > tol.null ? keep : drop).push_back(i);

  Matrix ukeep(m, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) ukeep.col(static_cast<Eigen::Index>(j)) = e.vectors.col(keep[j]);
  Matrix udrop(m, static_cast<Eigen::Index>(drop.size()));
  for (std::size_t j = 0; j < drop.size(); ++j) udrop.col(static_cast<Eigen::Index>(j)) = e.vectors.col(drop[j]);

  Matrix complement = range_basis(ukeep * ukeep.adjoint(), ukeep.cols());
  Matrix ideal = range_basis(udrop * udrop.adjoint(), udrop.cols());
  Matrix qgram = hermitian_part(complement.adjoint() * gram * complement);
  const Eigen::Index r = complement.cols();
  Vector vac = complement.adjoint() * Vector::Unit(m, 0);
  auto space = core::trusted_space(std::move(qgram), Matrix::Identity(r, r));
  return GnsSpace(basis, half, std::move(gram), std::move(complement), std::move(ideal), std::move(space),
                  std::move(vac));
}

Vector GnsSpace::word_vector(const Element& e) const {
  Vector v = Vector::Zero(word_gram_.rows());
  for (const Term& t : e) {
    if (static_cast<int>(t.word.size()) > half_) {
      if (t.coeff == cplx{0.0, 0.0}) continue;
      throw Error(ErrorCode::DegreeOverflow, "element of degree " + std::to_string(t.word.size()) +
                                                 " has no GNS coordinates below degree " + std::to_string(half_));
    }
    v(static_cast<Eigen::Index>(basis_.index(t.word))) += t.coeff;
  }
  return v;
}

Vector GnsSpace::coordinates_of_word_vector(const Vector& v) const { return complement_.adjoint() * v; }

Vector GnsSpace::coordinates(const Element& e) const { return coordinates_of_word_vector(word_vector(e)); }

Element field_action(const GnsSpace& g, int letter, const Element& f) {
  if (letter < 0 || letter >= g.basis().letters()) throw Error(ErrorCode::ShapeMismatch, "letter out of range");
  if (degree(f) >= g.half_degree()) {
    throw Error(ErrorCode::DegreeOverflow, "field action on degree " + std::to_string(degree(f)) +
                                               " reaches the truncation boundary");
  }
  return tensor(Element{{Word{letter}, 1.0}}, f);
}

Vector field_action_coordinates(const GnsSpace& g, int letter, const Element& f) {
  return g.coordinates(field_action(g, letter, f));
}

Matrix field_action_matrix(const GnsSpace& g, int letter) {
  const auto& basis = g.basis();
  const auto lower = static_cast<Eigen::Index>(basis.size_upto(g.half_degree() - 1));
  Matrix out(static_cast<Eigen::Index>(g.dim()), lower);
  for (Eigen::Index j = 0; j < lower; ++j) {
    const Element w{{basis.word(static_cast<std::size_t>(j)), 1.0}};
    out.col(j) = field_action_coordinates(g, letter, w);
  }
  return out;
}

}  // namespace kreinfield::gns
