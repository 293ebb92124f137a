#include "kreinfield/krein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreinfield/borchers.hpp"
#include "kreinfield/errors.hpp"

namespace kreinfield::core {

namespace {

Matrix sqrt_pd(const Matrix& a) {
  return hermitian_function(a, [](double x) { return std::sqrt(x); });
}

Matrix inv_sqrt_pd(const Matrix& a) {
  return hermitian_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

// aux^{1/2} eta aux^{-1/2}, Hermitian whenever eta is aux-self-adjoint
Matrix hermitian_image(const MetricOperator& m) {
  if (m.eta.rows() == 0) return Matrix(0, 0);
  return hermitian_part(sqrt_pd(m.aux) * m.eta * inv_sqrt_pd(m.aux));
}

bool krein_relation_holds(const Matrix& eta, double tol) {
  if (eta.rows() == 0) return true;
  return max_abs(eta * eta - Matrix::Identity(eta.rows(), eta.cols())) < tol;
}

void check_aux(const Matrix& aux, double tol_pd) {
  if (aux.rows() == 0) return;
  const HermitianEigen e = hermitian_eigen(aux);
  if (e.values(0) <= tol_pd) {
    throw Error(ErrorCode::AuxNotPositive,
                "auxiliary product has eigenvalue " + std::to_string(e.values(0)));
  }
}

}  // namespace

IndefiniteSpace build_space(const Matrix& gram, const Matrix& aux, const Tolerances& tol) {
  if (gram.rows() != gram.cols() || aux.rows() != aux.cols() || gram.rows() != aux.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "gram and aux must be square and of equal size");
  }
  const double defect = hermiticity_defect(gram);
  if (defect >= tol.herm) {
    throw Error(ErrorCode::NonHermitian, "gram deviates from its adjoint by " + std::to_string(defect));
  }
  if (hermiticity_defect(aux) >= tol.herm) {
    throw Error(ErrorCode::NonHermitian, "aux is not Hermitian");
  }
  Matrix aux_h = hermitian_part(aux);
  check_aux(aux_h, tol.pd);
  return IndefiniteSpace(hermitian_part(gram), std::move(aux_h));
}

IndefiniteSpace build_space(const Matrix& gram, const Tolerances& tol) {
  return build_space(gram, Matrix::Identity(gram.rows(), gram.cols()), tol);
}

IndefiniteSpace trusted_space(Matrix gram, Matrix aux) {
  return IndefiniteSpace(std::move(gram), std::move(aux));
}

MetricOperator metric_operator(const IndefiniteSpace& space, const Tolerances& tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(space.dim());
  MetricOperator m;
  if (n == 0) {
    m.eta = Matrix(0, 0);
    m.aux = Matrix(0, 0);
    m.is_krein = true;
    return m;
  }
  const Matrix isq = inv_sqrt_pd(space.aux());
  const HermitianEigen e = hermitian_eigen(isq * space.gram() * isq);
  const double norm = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  m.aux_scale = norm > 1.0 ? norm : 1.0;
  m.aux = m.aux_scale * space.aux();
  m.eta = m.aux.llt().solve(space.gram());
  m.is_krein = krein_relation_holds(m.eta, tol.eq);
  return m;
}

RealVector metric_spectrum(const MetricOperator& m) { return hermitian_eigen(hermitian_image(m)).values; }

MetricOperator krein_normalize(const IndefiniteSpace& space, const MetricOperator& m,
                               const Tolerances& tol) {
  if (static_cast<std::size_t>(m.eta.rows()) != space.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "metric operator does not match the space");
  }
  MetricOperator out;
  out.aux_scale = m.aux_scale;
  if (m.eta.rows() == 0) {
    out.eta = m.eta;
    out.aux = m.aux;
    out.is_krein = true;
    return out;
  }
  const HermitianEigen e = hermitian_eigen(hermitian_image(m));
  const RealVector abs_values = e.values.cwiseAbs();
  if (abs_values.minCoeff() <= tol.null) {
    throw Error(ErrorCode::SingularEta,
                "eta has eigenvalue of modulus " + std::to_string(abs_values.minCoeff()) +
                    "; strip the null space first");
  }
  RealVector signs(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) signs(i) = e.values(i) > 0.0 ? 1.0 : -1.0;

  const Matrix sq = sqrt_pd(m.aux);
  const Matrix isq = inv_sqrt_pd(m.aux);
  const Matrix& u = e.vectors;
  out.aux = hermitian_part(sq * u * abs_values.cast<cplx>().asDiagonal() * u.adjoint() * sq);
  out.eta = isq * u * signs.cast<cplx>().asDiagonal() * u.adjoint() * sq;
  out.is_krein = krein_relation_holds(out.eta, tol.eq);
  return out;
}

StrippedSpace strip_nulls(const IndefiniteSpace& space, const MetricOperator& m, const Tolerances& tol) {
  const Eigen::Index n = m.eta.rows();
  if (n == 0) return {space, m, Matrix(0, 0)};

  const HermitianEigen e = hermitian_eigen(hermitian_image(m));
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(e.values(i)) <= tol.null) null_cols.push_back(i);
  if (null_cols.empty()) return {space, m, Matrix::Identity(n, n)};

  Matrix u0(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) u0.col(static_cast<Eigen::Index>(j)) = e.vectors.col(null_cols[j]);

  const Matrix sq = sqrt_pd(m.aux);
  const Matrix isq = inv_sqrt_pd(m.aux);
  const Matrix p0 = isq * u0 * u0.adjoint() * sq;
  const Matrix keep = Matrix::Identity(n, n) - p0;
  const Eigen::Index rank = n - u0.cols();
  const Matrix v = range_basis(keep, rank, m.aux);

  Matrix gram_r = hermitian_part(v.adjoint() * space.gram() * v);
  Matrix aux_r = hermitian_part(v.adjoint() * m.aux * v);
  MetricOperator reduced;
  reduced.aux_scale = m.aux_scale;
  if (rank > 0) {
    reduced.eta = aux_r.llt().solve(gram_r);
  } else {
    reduced.eta = Matrix(0, 0);
  }
  reduced.aux = aux_r;
  reduced.is_krein = krein_relation_holds(reduced.eta, tol.eq);
  return {trusted_space(std::move(gram_r), std::move(aux_r)), std::move(reduced), v};
}

bool is_maximal(const MetricOperator& m, double tol) {
  if (m.eta.rows() == 0) return true;
  return metric_spectrum(m).cwiseAbs().minCoeff() >= tol;
}

KreinClosure maximalize(const IndefiniteSpace& space, const Tolerances& tol) {
  const MetricOperator m = metric_operator(space, tol);
  StrippedSpace stripped = strip_nulls(space, m, tol);
  MetricOperator k = krein_normalize(stripped.space, stripped.metric, tol);
  return {std::move(stripped), std::move(k)};
}

double inner_product_residual(const IndefiniteSpace& space, const KreinClosure& closure) {
  const Matrix a = closure.stripped.metric.aux_scale * space.aux();
  const Matrix& e = closure.stripped.embedding;
  if (e.cols() == 0) return max_abs(space.gram());
  // coordinates of the aux-orthogonal projection onto range(e)
  const Matrix coords = (e.adjoint() * a * e).llt().solve(e.adjoint() * a);
  const Matrix pulled = coords.adjoint() * (closure.krein.aux * closure.krein.eta) * coords;
  return max_abs(space.gram() - pulled);
}

double admissibility_constant(const IndefiniteSpace& space, const Tolerances& tol) {
  if (space.dim() == 0) return 0.0;
  check_aux(space.aux(), tol.pd);
  const Matrix isq = inv_sqrt_pd(space.aux());
  const RealVector values = hermitian_eigen(isq * space.gram() * isq).values;
  const double s = values.cwiseAbs().maxCoeff();
  return s * s;
}

Signature signature(const Matrix& gram, double tol_null) {
  Signature s;
  if (gram.rows() == 0) return s;
  const RealVector values = hermitian_eigen(gram).values;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > tol_null) {
      ++s.n_plus;
    } else if (values(i) < -tol_null) {
      ++s.n_minus;
    } else {
      ++s.n_zero;
    }
  }
  return s;
}

PsdQuotient quotient_psd(const Matrix& gram, double tol_null) {
  const Eigen::Index n = gram.rows();
  if (n == 0) return {Matrix(0, 0), Matrix(0, 0), Matrix(0, 0)};
  const HermitianEigen e = hermitian_eigen(gram);
  if (e.values(0) < -tol_null) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "restricted gram has eigenvalue " + std::to_string(e.values(0)));
  }
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (e.values(i) > tol_null) ++rank;
  const Matrix upos = e.vectors.rightCols(rank);
  const Matrix v = range_basis(upos * upos.adjoint(), rank);
  PsdQuotient q;
  q.projection = v.adjoint();
  q.gram = hermitian_part(v.adjoint() * gram * v);
  q.representatives = v;
  return q;
}

double dominance_constant(const gns::WightmanFunctional& w, const std::vector<RealVector>& weights,
                          int n, int m) {
  const int d_max = w.max_degree();
  if (n < 0 || m < 0 || n + m > d_max) {
    throw Error(ErrorCode::DegreeOverflow, "pair (" + std::to_string(n) + "," + std::to_string(m) +
                                               ") exceeds truncation degree " + std::to_string(d_max));
  }
  if (weights.size() < static_cast<std::size_t>(std::max(n, m) + 1)) {
    throw Error(ErrorCode::ShapeMismatch, "missing seminorm weights for a requested degree");
  }
  const auto& basis = w.basis();
  const auto rows = static_cast<Eigen::Index>(basis.words_of_degree(n));
  const auto cols = static_cast<Eigen::Index>(basis.words_of_degree(m));
  const RealVector& wn = weights[static_cast<std::size_t>(n)];
  const RealVector& wm = weights[static_cast<std::size_t>(m)];
  if (wn.size() != rows || wm.size() != cols) {
    throw Error(ErrorCode::ShapeMismatch, "seminorm weights have the wrong length");
  }
  if (wn.minCoeff() <= 0.0 || wm.minCoeff() <= 0.0) {
    throw Error(ErrorCode::ShapeMismatch, "seminorm weights must be positive");
  }
  const Vector& wnm = w.restriction(n + m);
  Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = wnm(i * cols + j) / (wn(i) * wm(j));
  return spectral_norm(x);
}

DominanceTable seminorm_dominance(const gns::WightmanFunctional& w, const std::vector<RealVector>& weights,
                                  double tol) {
  DominanceTable t;
  const int d_max = w.max_degree();
  for (int n = 0; n <= d_max; ++n) {
    for (int m = 0; n + m <= d_max; ++m) {
      const double c = dominance_constant(w, weights, n, m);
      t.constants[{n, m}] = c;
      t.max_constant = std::max(t.max_constant, c);
    }
  }
  t.admissible = t.max_constant <= 1.0 + tol;
  return t;
}

std::vector<RealVector> unit_weights(const gns::WightmanFunctional& w) {
  std::vector<RealVector> out;
  for (int n = 0; n <= w.max_degree(); ++n)
    out.push_back(RealVector::Ones(static_cast<Eigen::Index>(w.basis().words_of_degree(n))));
  return out;
}

std::vector<RealVector> normalized_weights(const gns::WightmanFunctional& w) {
  const int d_max = w.max_degree();
  const auto unit = unit_weights(w);
  std::vector<double> scale(static_cast<std::size_t>(d_max + 1), 1.0);
  for (int n = 0; n <= d_max; ++n) {
    for (int m = 0; n + m <= d_max; ++m) {
      const double c = std::max(dominance_constant(w, unit, n, m), dominance_constant(w, unit, m, n));
      const double s = std::sqrt(c);
      scale[static_cast<std::size_t>(n)] = std::max(scale[static_cast<std::size_t>(n)], s);
      scale[static_cast<std::size_t>(m)] = std::max(scale[static_cast<std::size_t>(m)], s);
    }
  }
  std::vector<RealVector> out;
  for (int n = 0; n <= d_max; ++n) out.push_back(unit[static_cast<std::size_t>(n)] * scale[static_cast<std::size_t>(n)]);
  return out;
}

}  // namespace kreinfield::core
