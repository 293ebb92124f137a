#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kreinfield/fock.hpp"
#include "kreinfield/krein.hpp"
#include "kreinfield/linalg.hpp"

namespace kreinfield::gb {

/// H' = joint kernel of the B+(k) inside the truncated Fock space, with its null part H''.
/// Columns are Euclidean-orthonormal in the occupation basis and graded by occupation.
struct PhysicalSubspace {
  Matrix basis;
  std::vector<int> occupation;  // per basis column
  Matrix gram;                  // basis^H eta basis
  Matrix null_basis;            // columns of H'' (inside span(basis))
  std::vector<int> null_occupation;
  std::vector<std::size_t> sector_dims;  // dim H' at occupation n
  std::vector<std::size_t> null_dims;    // dim H'' at occupation n
  double min_eigenvalue = 0.0;           // of the restricted gram
  bool contains_vacuum = false;
  double kernel_residual = 0.0;  // max_k ||B+(k) basis||
  int n_max = 0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

/// Throws EmptySubspace if nothing survives (never expected: the vacuum always does).
PhysicalSubspace physical_subspace(const fock::FockSpace& fock, const Tolerances& tol = {});

struct PhysicalQuotient {
  core::PsdQuotient quotient;
  std::vector<std::size_t> sector_dims;  // dim of H'/H'' at occupation n
  std::size_t dim() const noexcept { return quotient.dim(); }
};

/// Positive-definite quotient H'/H''. Throws NotPositiveSemidefinite.
PhysicalQuotient physical_quotient(const PhysicalSubspace& ps, const Tolerances& tol = {});

struct PreservationReport {
  double residual_physical = 0.0;  // ||(1 - P') op P'|| on inputs below the cap
  double residual_null = 0.0;      // ||(1 - P'') op P''|| on inputs below the cap
  bool pass = false;
};

PreservationReport observable_preservation(const fock::FieldOperator& op, const PhysicalSubspace& ps,
                                           const Tolerances& tol = {});

/// G_mu(f) - j_mu(f) with G_mu = sum_nu d^nu F_{nu mu}.
fock::FieldOperator maxwell_operator(const fock::FockSpace& fock, int mu, const fock::TestFunction& f,
                                     const std::optional<fock::FieldOperator>& current = std::nullopt);

/// max |<Psi, (G_mu(f) - j_mu(f)) Phi>| over pairs of H' basis vectors.
double weak_maxwell(const fock::FockSpace& fock, const PhysicalSubspace& ps, int mu, const fock::TestFunction& f,
                    const std::optional<fock::FieldOperator>& current = std::nullopt);

/// |<psi, (G_mu(f) - j_mu(f)) phi>| for one pair of Fock vectors.
double weak_maxwell_pair(const fock::FockSpace& fock, int mu, const fock::TestFunction& f, const Vector& psi,
                         const Vector& phi, const std::optional<fock::FieldOperator>& current = std::nullopt);

/// max |<Psi, B(f) Phi>| over pairs of H' basis vectors.
double gauge_expectation(const fock::FockSpace& fock, const PhysicalSubspace& ps, const fock::TestFunction& f);

/// Spectral norm of [X, Y] on inputs below the cap.
double commutator_norm(const fock::FockSpace& fock, const fock::FieldOperator& x, const fock::FieldOperator& y);

/// ||[B(f), F_{mu nu}(g)]|| on inputs below the cap.
double b_f_commutator(const fock::FockSpace& fock, const fock::TestFunction& f, const fock::TestFunction& g, int mu,
                      int nu);

struct FieldTensorSpan {
  std::vector<std::size_t> span_dims;      // rank of span{F...F Omega} after each depth
  std::vector<std::size_t> quotient_dims;  // rank of the gram on that span
  double max_outside = 0.0;                // largest component outside H'
};

/// Repeated application of F_{mu nu}(f), mu < nu, for each f to the vacuum.
FieldTensorSpan field_tensor_span(const fock::FockSpace& fock, const PhysicalSubspace& ps,
                                  const std::vector<fock::TestFunction>& fs, int depth, const Tolerances& tol = {});

}  // namespace kreinfield::gb
