#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kreinfield/borchers.hpp"
#include "kreinfield/linalg.hpp"
#include "kreinfield/profile.hpp"

namespace kreinfield::fock {

struct Mode {
  std::array<int, 3> index{};  // integer lattice coordinates
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  double omega = 0.0;

  FourVector momentum() const { return {omega, k(0), k(1), k(2)}; }
};

/// Massless modes k in (2 pi / L) Z^3 with the zero mode excluded.
class MomentumLattice {
 public:
  /// All modes with 0 < max |n_i| <= k_max.
  static MomentumLattice cubic(double box_length, int k_max);
  /// An explicit list of integer modes (no reflection closure required).
  static MomentumLattice from_modes(double box_length, const std::vector<std::array<int, 3>>& modes);

  double box_length() const noexcept { return box_length_; }
  double volume() const noexcept { return box_length_ * box_length_ * box_length_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const Mode& mode(std::size_t m) const { return modes_.at(m); }

  /// 1 / sqrt(2 omega L^3), the discrete normalization of one mode.
  double normalization(std::size_t m) const;

  bool reflection_closed() const;

 private:
  MomentumLattice(double box_length, std::vector<Mode> modes);
  double box_length_;
  std::vector<Mode> modes_;
};

inline constexpr std::size_t kDefaultDimLimit = 20000;

/// Occupation-number basis over (mode, Lorentz index) slots with total occupation <= n_max,
/// ordered by total occupation and then lexicographically in the sorted slot list.
class FockSpace {
 public:
  FockSpace(MomentumLattice lattice, int n_max, std::size_t dim_limit = kDefaultDimLimit);

  const MomentumLattice& lattice() const noexcept { return lattice_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t dim() const noexcept { return total_.size(); }
  std::size_t slot_count() const noexcept { return 4 * lattice_.size(); }
  static std::size_t slot(std::size_t mode, int mu) { return 4 * mode + static_cast<std::size_t>(mu); }
  static std::size_t slot_mode(std::size_t slot) { return slot / 4; }
  static int slot_index(std::size_t slot) { return static_cast<int>(slot % 4); }

  std::size_t vacuum() const noexcept { return 0; }

  /// Sorted slot list (with repetition) of a basis state.
  std::span<const std::uint32_t> occupied(std::size_t state) const;
  int occupation(std::size_t state) const { return total_[state]; }
  int occupation(std::size_t state, std::size_t slot) const;

  std::optional<std::size_t> find(std::span<const std::uint32_t> sorted_slots) const;

  /// First basis index of the occupation-n sector; sector_begin(n_max + 1) == dim().
  std::size_t sector_begin(int n) const { return sector_begin_.at(static_cast<std::size_t>(n)); }
  std::size_t sector_size(int n) const { return sector_begin(n + 1) - sector_begin(n); }

  /// Diagonal of eta = (-1)^{N_0}.
  const RealVector& eta() const noexcept { return eta_; }
  SparseMatrix eta_matrix() const;

  /// Momentum eigenvalue of a basis state.
  FourVector state_momentum(std::size_t state) const;

  /// Number of basis states with total occupation <= n_max for `slots` slots.
  static double count_states(std::size_t slots, int n_max);

 private:
  MomentumLattice lattice_;
  int n_max_;
  std::vector<std::uint32_t> flat_;
  std::vector<std::size_t> offset_;
  std::vector<int> total_;
  std::vector<std::size_t> sector_begin_;
  RealVector eta_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct FieldOperator {
  SparseMatrix matrix;
  std::string label;

  Matrix dense() const { return Matrix(matrix); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// op^ddagger = eta op^H eta.
FieldOperator krein_adjoint(const FockSpace& fock, const FieldOperator& op);
double krein_hermiticity_defect(const FockSpace& fock, const FieldOperator& op);

/// Per-mode, per-Lorentz-index momentum amplitudes of a test function on the lattice.
class TestFunction {
 public:
  TestFunction(Matrix amplitudes, bool real);

  /// Samples a profile on the forward shell p = (omega, k) of every lattice mode.
  static TestFunction sample(const MomentumLattice& lattice, const TestProfile& profile);
  /// Unit amplitudes in every component at a single mode, zero elsewhere.
  static TestFunction mode_indicator(const MomentumLattice& lattice, std::size_t mode, cplx value = 1.0);

  const Matrix& amplitudes() const noexcept { return amplitudes_; }
  cplx amplitude(std::size_t mode, int mu) const { return amplitudes_(static_cast<Eigen::Index>(mode), mu); }
  std::size_t modes() const noexcept { return static_cast<std::size_t>(amplitudes_.rows()); }
  bool real() const noexcept { return real_; }

  /// Amplitudes of f(x - a): each mode picks up exp(-i k.a).
  TestFunction translated(const MomentumLattice& lattice, const FourVector& a) const;

  const std::optional<TestProfile>& profile() const noexcept { return profile_; }

 private:
  Matrix amplitudes_;  // modes x 4
  bool real_;
  std::optional<TestProfile> profile_;
};

/// Field linear in the ladder operators: sum_s ann_s a_s + cre_s a^ddagger_s over slots.
class LinearField {
 public:
  explicit LinearField(std::size_t slots);
  LinearField(Vector annihilation, Vector creation);

  const Vector& annihilation() const noexcept { return ann_; }
  const Vector& creation() const noexcept { return cre_; }

  /// d_mu (lower index): annihilation part times -i k_mu, creation part times +i k_mu.
  LinearField derivative(const MomentumLattice& lattice, int mu) const;
  /// d^mu (upper index).
  LinearField raised_derivative(const MomentumLattice& lattice, int mu) const;

  LinearField annihilation_part() const;
  LinearField creation_part() const;

  LinearField& operator+=(const LinearField& other);
  LinearField& operator-=(const LinearField& other);
  friend LinearField operator+(LinearField a, const LinearField& b) { return a += b; }
  friend LinearField operator-(LinearField a, const LinearField& b) { return a -= b; }
  friend LinearField operator*(cplx s, LinearField a) {
    a.ann_ *= s;
    a.cre_ *= s;
    return a;
  }

  FieldOperator to_operator(const FockSpace& fock, std::string label) const;

 private:
  Vector ann_;
  Vector cre_;
};

enum class LadderKind { Annihilate, Create };

/// a_mu(k) = b_{mu k} and a^ddagger_mu(k) = eta b^dagger_{mu k} eta.
FieldOperator ladder(const FockSpace& fock, std::size_t mode, int mu, LadderKind kind);

/// Linear forms behind the field operators (throw ModeMismatch on a foreign test function).
LinearField potential_form(const MomentumLattice& lattice, int mu, const TestFunction& f);
/// F_{mu nu} = d_nu A_mu - d_mu A_nu.
LinearField field_strength_form(const MomentumLattice& lattice, int mu, int nu, const TestFunction& f);
/// B = d^mu A_mu.
LinearField gauge_form(const MomentumLattice& lattice, const TestFunction& f);
/// sum_nu d^nu F_{nu mu}.
LinearField maxwell_form(const MomentumLattice& lattice, int mu, const TestFunction& f);

FieldOperator field_A(const FockSpace& fock, int mu, const TestFunction& f);
FieldOperator field_F(const FockSpace& fock, int mu, int nu, const TestFunction& f);

struct GaugeFieldOperators {
  FieldOperator full;   // B
  FieldOperator plus;   // B^+ (annihilation part)
  FieldOperator minus;  // B^- = (B^+)^ddagger
};
GaugeFieldOperators field_B(const FockSpace& fock, const TestFunction& f);

/// B^+ for a single mode with unit smearing: -i k^mu a_mu(k) / sqrt(2 omega L^3).
FieldOperator b_plus_mode(const FockSpace& fock, std::size_t mode);

FieldOperator momentum_operator(const FockSpace& fock, int mu);
/// U(a) = exp(i a.P), diagonal.
FieldOperator translation(const FockSpace& fock, const FourVector& a);

struct SpectralReport {
  double min_mass_squared = 0.0;
  double min_energy = 0.0;
  bool pass = false;
};
SpectralReport spectral_report(const FockSpace& fock, double tol);
bool spectral_check(const FockSpace& fock, double tol);

/// Number of basis states with P^0 eigenvalue <= tol (1 means the vacuum is unique).
std::size_t zero_energy_states(const FockSpace& fock, double tol);

/// Columns (as states) with total occupation <= n_max - 1, where the truncated CCR are exact.
std::size_t below_cap(const FockSpace& fock);

/// [X, Y] restricted to input states below the cap.
Matrix restricted_commutator(const FockSpace& fock, const FieldOperator& x, const FieldOperator& y);

/// Vacuum expectation values <Omega, L_{l1} ... L_{ln} Omega> of the given letters.
gns::WightmanFunctional wightman_from_fock(const FockSpace& fock, const std::vector<FieldOperator>& letters,
                                           int max_degree, std::vector<int> star = {});

}  // namespace kreinfield::fock
