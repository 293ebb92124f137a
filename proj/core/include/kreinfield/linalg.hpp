#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace kreinfield {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr cplx I_UNIT{0.0, 1.0};

/// Numerical thresholds shared by every module. Defaults are sized for dense
/// double precision eigensolvers on matrices up to a few thousand rows.
struct Tolerances {
  double herm = 1e-10;   // Hermiticity defect accepted (and symmetrized away)
  double eq = 1e-10;     // identities that should hold to rounding
  double null = 1e-8;    // eigen/singular values treated as zero
  double pd = 1e-12;     // smallest admissible eigenvalue of an auxiliary product
  double obs = 1e-8;     // projector-based residuals
  double gauge = 1e-6;   // distance from the Landau point lambda = 1
  double loc = 1e-3;     // relative smeared commutator at spacelike separation
  double rich = 1e-4;    // Richardson guard for the mass-derivative step
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns, Euclidean-orthonormal
};

HermitianEigen hermitian_eigen(const Matrix& h);

/// Largest |A - A^H| entry.
double hermiticity_defect(const Matrix& a);

Matrix hermitian_part(const Matrix& a);

/// Spectral (largest singular value) norm.
double spectral_norm(const Matrix& a);

double max_abs(const Matrix& a);

/// f(H) for Hermitian H through the eigendecomposition.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  const HermitianEigen e = hermitian_eigen(h);
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  return e.vectors * mapped.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// Deterministic orthonormal basis for the range of a projector `p` of known
/// rank, orthonormal with respect to the scalar product given by `aux`.
/// Columns are selected by column-pivoted QR and then orthonormalized by
/// modified Gram-Schmidt in ascending original column order, so that
/// coordinate-aligned subspaces come back as the coordinate vectors.
Matrix range_basis(const Matrix& p, Eigen::Index rank, const Matrix& aux);
Matrix range_basis(const Matrix& p, Eigen::Index rank);

/// Orthonormal (Euclidean) basis of the numerical kernel of `a`: right
/// singular vectors with singular value <= tol, canonicalized through
/// range_basis.
Matrix kernel_basis(const Matrix& a, double tol);

}  // namespace kreinfield
