#include "kreinfield/gupta_bleuler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreinfield/errors.hpp"

namespace kreinfield::gb {

namespace {

Eigen::Index cap_columns(const std::vector<int>& occupation, int n_max) {
  return static_cast<Eigen::Index>(
      std::count_if(occupation.begin(), occupation.end(), [n_max](int n) { return n < n_max; }));
}

double outside_residual(const Matrix& range, const Matrix& image) {
  if (image.cols() == 0) return 0.0;
  const Matrix outside = image - range * (range.adjoint() * image);
  return spectral_norm(outside);
}

Matrix eta_times(const fock::FockSpace& fock, const Matrix& m) {
  return fock.eta().cast<cplx>().asDiagonal() * m;
}

}  // namespace

PhysicalSubspace physical_subspace(const fock::FockSpace& fock, const Tolerances& tol) {
  const auto& lattice = fock.lattice();
  std::vector<Matrix> bplus;
  bplus.reserve(lattice.size());
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    // unit-energy normalization keeps the singular values O(1) on every lattice
    const double scale = 1.0 / (lattice.mode(m).omega * lattice.normalization(m));
    bplus.push_back(scale * fock::b_plus_mode(fock, m).dense());
  }

  PhysicalSubspace ps;
  ps.n_max = fock.n_max();
  const auto d = static_cast<Eigen::Index>(fock.dim());
  std::vector<Matrix> sectors;
  for (int n = 0; n <= fock.n_max(); ++n) {
    const auto begin = static_cast<Eigen::Index>(fock.sector_begin(n));
    const auto size = static_cast<Eigen::Index>(fock.sector_size(n));
    Matrix kernel;
    if (n == 0) {
      kernel = Matrix::Identity(size, size);
    } else {
      const auto lower_begin = static_cast<Eigen::Index>(fock.sector_begin(n - 1));
      const auto lower_size = static_cast<Eigen::Index>(fock.sector_size(n - 1));
      Matrix stacked(lower_size * static_cast<Eigen::Index>(bplus.size()), size);
      for (std::size_t m = 0; m < bplus.size(); ++m)
        stacked.middleRows(static_cast<Eigen::Index>(m) * lower_size, lower_size) =
            bplus[m].block(lower_begin, begin, lower_size, size);
      kernel = kernel_basis(stacked, tol.null);
    }
    Matrix embedded = Matrix::Zero(d, kernel.cols());
    embedded.middleRows(begin, size) = kernel;
    sectors.push_back(std::move(embedded));
    ps.sector_dims.push_back(static_cast<std::size_t>(kernel.cols()));
  }

  Eigen::Index total = 0;
  for (const Matrix& s : sectors) total += s.cols();
  if (total == 0) throw Error(ErrorCode::EmptySubspace, "joint kernel of B+ is empty");
  ps.basis.resize(d, total);
  Eigen::Index col = 0;
  for (int n = 0; n <= fock.n_max(); ++n) {
    const Matrix& s = sectors[static_cast<std::size_t>(n)];
    ps.basis.middleCols(col, s.cols()) = s;
    ps.occupation.insert(ps.occupation.end(), static_cast<std::size_t>(s.cols()), n);
    col += s.cols();
  }
  ps.gram = hermitian_part(ps.basis.adjoint() * eta_times(fock, ps.basis));

  for (const Matrix& b : bplus) ps.kernel_residual = std::max(ps.kernel_residual, spectral_norm(b * ps.basis));
  const Vector vac = Vector::Unit(d, static_cast<Eigen::Index>(fock.vacuum()));
  ps.contains_vacuum = (vac - ps.basis * (ps.basis.adjoint() * vac)).norm() <= tol.null;

  // null vectors are found sector by sector: the gram is block diagonal in occupation
  std::vector<Matrix> nulls;
  ps.min_eigenvalue = 0.0;
  bool first = true;
  col = 0;
  for (int n = 0; n <= fock.n_max(); ++n) {
    const Eigen::Index k = static_cast<Eigen::Index>(ps.sector_dims[static_cast<std::size_t>(n)]);
    if (k == 0) {
      ps.null_dims.push_back(0);
      continue;
    }
    const Matrix block = ps.gram.block(col, col, k, k);
    const HermitianEigen e = hermitian_eigen(block);
    if (first || e.values(0) < ps.min_eigenvalue) ps.min_eigenvalue = e.values(0);
    first = false;
    std::vector<Eigen::Index> zero;
    for (Eigen::Index i = 0; i < k; ++i)
      if (std::abs(e.values(i)) <= tol.null) zero.push_back(i);
    Matrix u(k, static_cast<Eigen::Index>(zero.size()));
    for (std::size_t j = 0; j < zero.size(); ++j) u.col(static_cast<Eigen::Index>(j)) = e.vectors.col(zero[j]);
    if (!zero.empty()) {
      const Matrix canon = range_basis(u * u.adjoint(), u.cols());
      nulls.push_back(ps.basis.middleCols(col, k) * canon);
      ps.null_occupation.insert(ps.null_occupation.end(), zero.size(), n);
    }
    ps.null_dims.push_back(zero.size());
    col += k;
  }
  Eigen::Index null_total = 0;
  for (const Matrix& m : nulls) null_total += m.cols();
  ps.null_basis.resize(d, null_total);
  col = 0;
  for (const Matrix& m : nulls) {
    ps.null_basis.middleCols(col, m.cols()) = m;
    col += m.cols();
  }
  return ps;
}

PhysicalQuotient physical_quotient(const PhysicalSubspace& ps, const Tolerances& tol) {
  PhysicalQuotient out;
  out.quotient = core::quotient_psd(ps.gram, tol.null);
  Eigen::Index col = 0;
  for (std::size_t k : ps.sector_dims) {
    const auto n = static_cast<Eigen::Index>(k);
    out.sector_dims.push_back(n == 0 ? 0 : core::quotient_psd(ps.gram.block(col, col, n, n), tol.null).dim());
    col += n;
  }
  return out;
}

PreservationReport observable_preservation(const fock::FieldOperator& op, const PhysicalSubspace& ps,
                                           const Tolerances& tol) {
  PreservationReport r;
  const Eigen::Index cap = cap_columns(ps.occupation, ps.n_max);
  r.residual_physical = outside_residual(ps.basis, op.matrix * ps.basis.leftCols(cap));
  const Eigen::Index null_cap = cap_columns(ps.null_occupation, ps.n_max);
  r.residual_null = outside_residual(ps.null_basis, op.matrix * ps.null_basis.leftCols(null_cap));
  r.pass = r.residual_physical <= tol.obs && r.residual_null <= tol.obs;
  return r;
}

fock::FieldOperator maxwell_operator(const fock::FockSpace& fock, int mu, const fock::TestFunction& f,
                                     const std::optional<fock::FieldOperator>& current) {
  fock::FieldOperator g =
      fock::maxwell_form(fock.lattice(), mu, f).to_operator(fock, "dF_" + std::to_string(mu) + "(f)");
  if (current) {
    if (current->dim() != fock.dim()) throw Error(ErrorCode::ShapeMismatch, "current lives on another Fock space");
    g.matrix -= current->matrix;
  }
  return g;
}

double weak_maxwell(const fock::FockSpace& fock, const PhysicalSubspace& ps, int mu, const fock::TestFunction& f,
                    const std::optional<fock::FieldOperator>& current) {
  const fock::FieldOperator g = maxwell_operator(fock, mu, f, current);
  const Matrix pairs = ps.basis.adjoint() * eta_times(fock, g.matrix * ps.basis);
  return max_abs(pairs);
}

double weak_maxwell_pair(const fock::FockSpace& fock, int mu, const fock::TestFunction& f, const Vector& psi,
                         const Vector& phi, const std::optional<fock::FieldOperator>& current) {
  const fock::FieldOperator g = maxwell_operator(fock, mu, f, current);
  const Vector gphi = g.matrix * phi;
  return std::abs(psi.dot(fock.eta().cast<cplx>().asDiagonal() * gphi));
}

double gauge_expectation(const fock::FockSpace& fock, const PhysicalSubspace& ps, const fock::TestFunction& f) {
  const fock::FieldOperator b = fock::field_B(fock, f).full;
  return max_abs(ps.basis.adjoint() * eta_times(fock, b.matrix * ps.basis));
}

double commutator_norm(const fock::FockSpace& fock, const fock::FieldOperator& x, const fock::FieldOperator& y) {
  return spectral_norm(fock::restricted_commutator(fock, x, y));
}

double b_f_commutator(const fock::FockSpace& fock, const fock::TestFunction& f, const fock::TestFunction& g, int mu,
                      int nu) {
  return commutator_norm(fock, fock::field_B(fock, f).full, fock::field_F(fock, mu, nu, g));
}

FieldTensorSpan field_tensor_span(const fock::FockSpace& fock, const PhysicalSubspace& ps,
                                  const std::vector<fock::TestFunction>& fs, int depth, const Tolerances& tol) {
  std::vector<fock::FieldOperator> ops;
  for (const auto& f : fs)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) ops.push_back(fock::field_F(fock, mu, nu, f));

  FieldTensorSpan out;
  const auto d = static_cast<Eigen::Index>(fock.dim());
  std::vector<Vector> frontier{Vector::Unit(d, static_cast<Eigen::Index>(fock.vacuum()))};
  std::vector<Vector> all = frontier;
  for (int level = 1; level <= depth; ++level) {
    std::vector<Vector> next;
    for (const Vector& v : frontier)
      for (const auto& op : ops) {
        Vector w = op.matrix * v;
        out.max_outside = std::max(out.max_outside, (w - ps.basis * (ps.basis.adjoint() * w)).norm());
        next.push_back(std::move(w));
      }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);

    Matrix span(d, static_cast<Eigen::Index>(all.size()));
    for (std::size_t j = 0; j < all.size(); ++j) span.col(static_cast<Eigen::Index>(j)) = all[j];
    Eigen::BDCSVD<Matrix> svd(span, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol.null * std::max(1.0, smax)) ++rank;
    out.span_dims.push_back(static_cast<std::size_t>(rank));
    const Matrix u = svd.matrixU().leftCols(rank);
    const core::Signature sig = core::signature(hermitian_part(u.adjoint() * eta_times(fock, u)), tol.null);
    out.quotient_dims.push_back(sig.n_plus + sig.n_minus);
  }
  return out;
}

}  // namespace kreinfield::gb
