#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "kreinfield/linalg.hpp"

namespace kreinfield::gns {
class WightmanFunctional;
}

namespace kreinfield::core {

/// Finite-dimensional space carrying an indefinite inner product <x,y> = x^H G y
/// (the Gram matrix G) and an auxiliary positive scalar product (x,y) = x^H A y.
class IndefiniteSpace {
 public:
  const Matrix& gram() const noexcept { return gram_; }
  const Matrix& aux() const noexcept { return aux_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(gram_.rows()); }

  cplx inner(const Vector& x, const Vector& y) const { return x.dot(gram_ * y); }
  cplx aux_inner(const Vector& x, const Vector& y) const { return x.dot(aux_ * y); }

 private:
  friend IndefiniteSpace build_space(const Matrix&, const Matrix&, const Tolerances&);
  friend IndefiniteSpace trusted_space(Matrix, Matrix);
  IndefiniteSpace(Matrix gram, Matrix aux) : gram_(std::move(gram)), aux_(std::move(aux)) {}

  Matrix gram_;
  Matrix aux_;
};

/// Validates and symmetrizes. Throws ShapeMismatch, NonHermitian, AuxNotPositive.
IndefiniteSpace build_space(const Matrix& gram, const Matrix& aux, const Tolerances& tol = {});
IndefiniteSpace build_space(const Matrix& gram, const Tolerances& tol = {});

/// Wraps matrices already known to be valid (internal constructions).
IndefiniteSpace trusted_space(Matrix gram, Matrix aux);

/// Self-adjoint contraction eta with <x,y> = (x, eta y), relative to `aux`.
struct MetricOperator {
  Matrix eta;
  Matrix aux;              // scalar product eta is self-adjoint against
  double aux_scale = 1.0;  // factor applied to the input aux to make eta a contraction
  bool is_krein = false;   // eta^2 == 1 to tol.eq
};

MetricOperator metric_operator(const IndefiniteSpace& space, const Tolerances& tol = {});

/// Eigenvalues of eta (it is similar to aux^{1/2} eta aux^{-1/2}, which is Hermitian).
RealVector metric_spectrum(const MetricOperator& m);

/// Replaces (.,.) by (., |eta| .) and eta by sign(eta). Throws SingularEta.
MetricOperator krein_normalize(const IndefiniteSpace& space, const MetricOperator& m,
                               const Tolerances& tol = {});

struct StrippedSpace {
  IndefiniteSpace space;
  MetricOperator metric;
  Matrix embedding;  // columns span range(1 - P0) in the original coordinates
};

/// Restricts to the aux-orthogonal complement of the null space of eta.
StrippedSpace strip_nulls(const IndefiniteSpace& space, const MetricOperator& m,
                          const Tolerances& tol = {});

/// Finite surrogate for a continuous inverse: min |eig(eta)| >= tol.
bool is_maximal(const MetricOperator& m, double tol);

/// Result of the two-step maximalization (strip_nulls then krein_normalize).
struct KreinClosure {
  StrippedSpace stripped;
  MetricOperator krein;
};
KreinClosure maximalize(const IndefiniteSpace& space, const Tolerances& tol = {});

/// Largest entry of G - A E (A1 eta1) E^H A: how far the Krein data, pulled back through
/// the aux-orthogonal projection onto the stripped range, misses the original product.
double inner_product_residual(const IndefiniteSpace& space, const KreinClosure& closure);

/// Smallest C with |<x,y>|^2 <= C (x,x)(y,y).
double admissibility_constant(const IndefiniteSpace& space, const Tolerances& tol = {});

struct Signature {
  std::size_t n_plus = 0;
  std::size_t n_zero = 0;
  std::size_t n_minus = 0;

  std::size_t dim() const noexcept { return n_plus + n_zero + n_minus; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature(const Matrix& gram, double tol_null);

struct PsdQuotient {
  Matrix projection;  // rows: quotient coordinates of the original basis vectors
  Matrix gram;        // positive definite
  Matrix representatives;  // columns: original-space representatives of the quotient basis
  std::size_t dim() const noexcept { return static_cast<std::size_t>(gram.rows()); }
};

/// Quotients out the null vectors of a PSD Gram matrix. Throws NotPositiveSemidefinite.
PsdQuotient quotient_psd(const Matrix& gram, double tol_null);

/// Constants c(n,m) of the weighted seminorm bound |W_{n+m}(f (x) h)| <= c p_n(f) p_m(h).
struct DominanceTable {
  std::map<std::pair<int, int>, double> constants;
  bool admissible = false;
  double max_constant = 0.0;
};

/// Seminorms p_n(f) = || diag(weights[n]) f ||_2 on the degree-n word basis.
/// Throws DegreeOverflow if asked for a pair beyond the truncation.
double dominance_constant(const gns::WightmanFunctional& w, const std::vector<RealVector>& weights,
                          int n, int m);
DominanceTable seminorm_dominance(const gns::WightmanFunctional& w,
                                  const std::vector<RealVector>& weights, double tol = 1e-10);

/// Uniform per-degree weights s_n >= 1 that make every c(n,m) <= 1.
std::vector<RealVector> normalized_weights(const gns::WightmanFunctional& w);
std::vector<RealVector> unit_weights(const gns::WightmanFunctional& w);

}  // namespace kreinfield::core
