#include "kreinfield/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "kreinfield/errors.hpp"

namespace kreinfield {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::AuxNotPositive: return "AuxNotPositive";
    case ErrorCode::SingularEta: return "SingularEta";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::EmptySubspace: return "EmptySubspace";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::LandauGauge: return "LandauGauge";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ReportWriteFailed: return "ReportWriteFailed";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

HermitianEigen hermitian_eigen(const Matrix& h) {
  if (h.rows() == 0) return {RealVector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_defect(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix range_basis(const Matrix& p, Eigen::Index rank, const Matrix& aux) {
  const Eigen::Index n = p.rows();
  if (rank == 0 || n == 0) return Matrix(n, 0);

  const Matrix aux_sqrt = hermitian_function(aux, [](double x) { return std::sqrt(x); });
  const Matrix aux_isqrt = hermitian_function(aux, [](double x) { return 1.0 / std::sqrt(x); });
  const Matrix w = aux_sqrt * p;

  Eigen::ColPivHouseholderQR<Matrix> qr(w);
  std::vector<Eigen::Index> picked;
  picked.reserve(static_cast<std::size_t>(rank));
  for (Eigen::Index i = 0; i < rank; ++i) picked.push_back(qr.colsPermutation().indices()(i));
  std::sort(picked.begin(), picked.end());

  Matrix e(n, rank);
  Eigen::Index filled = 0;
  for (Eigen::Index col : picked) {
    Vector v = w.col(col);
    // two passes of MGS keep the basis orthonormal to rounding
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) v -= e.col(j).dot(v) * e.col(j);
    }
    const double nv = v.norm();
    if (nv == 0.0) continue;
    v /= nv;
    // fix the phase: largest entry real and positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    e.col(filled++) = v;
  }
  return aux_isqrt * e.leftCols(filled);
}

Matrix range_basis(const Matrix& p, Eigen::Index rank) {
  return range_basis(p, rank, Matrix::Identity(p.rows(), p.rows()));
}

Matrix kernel_basis(const Matrix& a, double tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  Eigen::Index nonzero = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++nonzero;
  const Eigen::Index k = n - nonzero;
  if (k == 0) return Matrix(n, 0);
  const Matrix v0 = svd.matrixV().rightCols(k);
  return range_basis(v0 * v0.adjoint(), k);
}

}  // namespace kreinfield
