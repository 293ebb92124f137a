#include "kreinfield/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "kreinfield/errors.hpp"

namespace kreinfield::fock {

namespace {

std::string make_key(std::span<const std::uint32_t> slots) {
  return std::string(reinterpret_cast<const char*>(slots.data()), slots.size() * sizeof(std::uint32_t));
}

Mode make_mode(double box_length, const std::array<int, 3>& n) {
  Mode m;
  m.index = n;
  const double dk = 2.0 * std::numbers::pi / box_length;
  m.k = Eigen::Vector3d(n[0], n[1], n[2]) * dk;
  m.omega = m.k.norm();
  return m;
}

void check_modes(const MomentumLattice& lattice, const TestFunction& f) {
  if (f.modes() != lattice.size()) {
    throw Error(ErrorCode::ModeMismatch, "test function has " + std::to_string(f.modes()) +
                                             " modes, lattice has " + std::to_string(lattice.size()));
  }
}

// -1 for the timelike index: the Krein adjoint of b_0 picks up the sign of eta
double creation_sign(int mu) { return mu == 0 ? -1.0 : 1.0; }

}  // namespace

MomentumLattice::MomentumLattice(double box_length, std::vector<Mode> modes)
    : box_length_(box_length), modes_(std::move(modes)) {}

MomentumLattice MomentumLattice::cubic(double box_length, int k_max) {
  if (box_length <= 0.0 || k_max < 1) throw Error(ErrorCode::ShapeMismatch, "lattice needs L > 0 and k_max >= 1");
  std::vector<Mode> modes;
  for (int x = -k_max; x <= k_max; ++x)
    for (int y = -k_max; y <= k_max; ++y)
      for (int z = -k_max; z <= k_max; ++z)
        if (x != 0 || y != 0 || z != 0) modes.push_back(make_mode(box_length, {x, y, z}));
  return MomentumLattice(box_length, std::move(modes));
}

MomentumLattice MomentumLattice::from_modes(double box_length, const std::vector<std::array<int, 3>>& list) {
  if (box_length <= 0.0) throw Error(ErrorCode::ShapeMismatch, "lattice needs L > 0");
  if (list.empty()) throw Error(ErrorCode::ShapeMismatch, "lattice needs at least one mode");
  std::set<std::array<int, 3>> seen;
  std::vector<Mode> modes;
  for (const auto& n : list) {
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) throw Error(ErrorCode::ShapeMismatch, "zero mode is excluded");
    if (!seen.insert(n).second) throw Error(ErrorCode::ShapeMismatch, "duplicate lattice mode");
    modes.push_back(make_mode(box_length, n));
  }
  return MomentumLattice(box_length, std::move(modes));
}

double MomentumLattice::normalization(std::size_t m) const {
  return 1.0 / std::sqrt(2.0 * modes_.at(m).omega * volume());
}

bool MomentumLattice::reflection_closed() const {
  std::set<std::array<int, 3>> idx;
  for (const Mode& m : modes_) idx.insert(m.index);
  for (const Mode& m : modes_)
    if (!idx.count({-m.index[0], -m.index[1], -m.index[2]})) return false;
  return true;
}

double FockSpace::count_states(std::size_t slots, int n_max) {
  // sum_n C(slots + n - 1, n)
  double total = 0.0;
  double term = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) term = term * static_cast<double>(slots + static_cast<std::size_t>(n) - 1) / n;
    total += term;
  }
  return total;
}

FockSpace::FockSpace(MomentumLattice lattice, int n_max, std::size_t dim_limit)
    : lattice_(std::move(lattice)), n_max_(n_max) {
  if (n_max < 1) throw Error(ErrorCode::ShapeMismatch, "n_max must be at least 1");
  const std::size_t slots = slot_count();
  const double expected = count_states(slots, n_max);
  if (expected > static_cast<double>(dim_limit)) {
    throw Error(ErrorCode::DimensionOverflow, "Fock basis would have " + std::to_string(expected) +
                                                  " states, limit is " + std::to_string(dim_limit));
  }
  const auto dim = static_cast<std::size_t>(expected + 0.5);
  total_.reserve(dim);
  offset_.reserve(dim + 1);
  lookup_.reserve(dim);
  offset_.push_back(0);

  std::vector<std::uint32_t> seq;
  auto emit = [&]() {
    lookup_.emplace(make_key(seq), total_.size());
    flat_.insert(flat_.end(), seq.begin(), seq.end());
    offset_.push_back(flat_.size());
    total_.push_back(static_cast<int>(seq.size()));
  };
  // non-decreasing slot sequences of length n in lexicographic order
  auto recurse = [&](auto&& self, std::uint32_t start, int remaining) -> void {
    if (remaining == 0) {
      emit();
      return;
    }
    for (std::uint32_t s = start; s < slots; ++s) {
      seq.push_back(s);
      self(self, s, remaining - 1);
      seq.pop_back();
    }
  };
  for (int n = 0; n <= n_max; ++n) {
    sector_begin_.push_back(total_.size());
    recurse(recurse, 0, n);
  }
  sector_begin_.push_back(total_.size());

  eta_.resize(static_cast<Eigen::Index>(total_.size()));
  for (std::size_t i = 0; i < total_.size(); ++i) {
    int n0 = 0;
    for (std::uint32_t s : occupied(i))
      if (slot_index(s) == 0) ++n0;
    eta_(static_cast<Eigen::Index>(i)) = (n0 % 2 == 0) ? 1.0 : -1.0;
  }
}

std::span<const std::uint32_t> FockSpace::occupied(std::size_t state) const {
  return {flat_.data() + offset_[state], offset_[state + 1] - offset_[state]};
}

int FockSpace::occupation(std::size_t state, std::size_t slot) const {
  const auto occ = occupied(state);
  return static_cast<int>(std::count(occ.begin(), occ.end(), static_cast<std::uint32_t>(slot)));
}

std::optional<std::size_t> FockSpace::find(std::span<const std::uint32_t> sorted_slots) const {
  const auto it = lookup_.find(make_key(sorted_slots));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SparseMatrix FockSpace::eta_matrix() const {
  SparseMatrix m(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
  m.reserve(Eigen::VectorXi::Constant(static_cast<Eigen::Index>(dim()), 1));
  for (Eigen::Index i = 0; i < eta_.size(); ++i) m.insert(i, i) = eta_(i);
  m.makeCompressed();
  return m;
}

FourVector FockSpace::state_momentum(std::size_t state) const {
  FourVector p = FourVector::Zero();
  for (std::uint32_t s : occupied(state)) p += lattice_.mode(slot_mode(s)).momentum();
  return p;
}

FieldOperator krein_adjoint(const FockSpace& fock, const FieldOperator& op) {
  const SparseMatrix eta = fock.eta_matrix();
  SparseMatrix adj = op.matrix.adjoint();
  return {eta * adj * eta, op.label + "^ddagger"};
}

double krein_hermiticity_defect(const FockSpace& fock, const FieldOperator& op) {
  const SparseMatrix diff = krein_adjoint(fock, op).matrix - op.matrix;
  double m = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

TestFunction::TestFunction(Matrix amplitudes, bool real) : amplitudes_(std::move(amplitudes)), real_(real) {
  if (amplitudes_.cols() != 4) throw Error(ErrorCode::ShapeMismatch, "test function needs 4 components per mode");
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::ShapeMismatch, "test function amplitudes must be finite");
}

TestFunction TestFunction::sample(const MomentumLattice& lattice, const TestProfile& profile) {
  Matrix amp(static_cast<Eigen::Index>(lattice.size()), 4);
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const FourVector p = lattice.mode(m).momentum();
    for (int mu = 0; mu < 4; ++mu) amp(static_cast<Eigen::Index>(m), mu) = profile.amplitude(mu, p);
  }
  TestFunction f(std::move(amp), profile.real());
  f.profile_ = profile;
  return f;
}

TestFunction TestFunction::mode_indicator(const MomentumLattice& lattice, std::size_t mode, cplx value) {
  Matrix amp = Matrix::Zero(static_cast<Eigen::Index>(lattice.size()), 4);
  amp.row(static_cast<Eigen::Index>(mode)).setConstant(value);
  return TestFunction(std::move(amp), false);
}

TestFunction TestFunction::translated(const MomentumLattice& lattice, const FourVector& a) const {
  if (modes() != lattice.size()) throw Error(ErrorCode::ModeMismatch, "translation on a foreign lattice");
  Matrix amp = amplitudes_;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const double phase = -minkowski(lattice.mode(m).momentum(), a);
    amp.row(static_cast<Eigen::Index>(m)) *= cplx{std::cos(phase), std::sin(phase)};
  }
  TestFunction f(std::move(amp), real_);
  if (profile_) f.profile_ = profile_->translated(a);
  return f;
}

LinearField::LinearField(std::size_t slots)
    : ann_(Vector::Zero(static_cast<Eigen::Index>(slots))), cre_(Vector::Zero(static_cast<Eigen::Index>(slots))) {}

LinearField::LinearField(Vector annihilation, Vector creation) : ann_(std::move(annihilation)), cre_(std::move(creation)) {
  if (ann_.size() != cre_.size()) throw Error(ErrorCode::ShapeMismatch, "ladder coefficient lengths differ");
}

LinearField LinearField::derivative(const MomentumLattice& lattice, int mu) const {
  LinearField out(*this);
  for (Eigen::Index s = 0; s < ann_.size(); ++s) {
    const double k = lower(lattice.mode(FockSpace::slot_mode(static_cast<std::size_t>(s))).momentum())(mu);
    out.ann_(s) *= -I_UNIT * k;
    out.cre_(s) *= I_UNIT * k;
  }
  return out;
}

LinearField LinearField::raised_derivative(const MomentumLattice& lattice, int mu) const {
  LinearField out(*this);
  for (Eigen::Index s = 0; s < ann_.size(); ++s) {
    const double k = lattice.mode(FockSpace::slot_mode(static_cast<std::size_t>(s))).momentum()(mu);
    out.ann_(s) *= -I_UNIT * k;
    out.cre_(s) *= I_UNIT * k;
  }
  return out;
}

LinearField LinearField::annihilation_part() const { return LinearField(ann_, Vector::Zero(cre_.size())); }
LinearField LinearField::creation_part() const { return LinearField(Vector::Zero(ann_.size()), cre_); }

LinearField& LinearField::operator+=(const LinearField& other) {
  ann_ += other.ann_;
  cre_ += other.cre_;
  return *this;
}

LinearField& LinearField::operator-=(const LinearField& other) {
  ann_ -= other.ann_;
  cre_ -= other.cre_;
  return *this;
}

FieldOperator LinearField::to_operator(const FockSpace& fock, std::string label) const {
  if (static_cast<std::size_t>(ann_.size()) != fock.slot_count()) {
    throw Error(ErrorCode::ModeMismatch, "linear field does not match the Fock slots");
  }
  std::vector<Eigen::Triplet<cplx>> triplets;
  std::vector<std::uint32_t> lowered;
  for (std::size_t i = 0; i < fock.dim(); ++i) {
    const auto occ = fock.occupied(i);
    for (std::size_t pos = 0; pos < occ.size(); ++pos) {
      if (pos > 0 && occ[pos] == occ[pos - 1]) continue;
      const std::uint32_t s = occ[pos];
      const cplx a = ann_(s);
      const cplx c = cre_(s);
      if (a == cplx{0.0, 0.0} && c == cplx{0.0, 0.0}) continue;
      const auto count = static_cast<double>(std::count(occ.begin(), occ.end(), s));
      lowered.assign(occ.begin(), occ.end());
      lowered.erase(lowered.begin() + static_cast<std::ptrdiff_t>(pos));
      const std::size_t j = *fock.find(lowered);
      const double amp = std::sqrt(count);
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (a != cplx{0.0, 0.0}) triplets.emplace_back(jj, ii, a * amp);
      if (c != cplx{0.0, 0.0}) triplets.emplace_back(ii, jj, c * creation_sign(FockSpace::slot_index(s)) * amp);
    }
  }
  const auto d = static_cast<Eigen::Index>(fock.dim());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return {std::move(m), std::move(label)};
}

FieldOperator ladder(const FockSpace& fock, std::size_t mode, int mu, LadderKind kind) {
  LinearField lf(fock.slot_count());
  Vector ann = Vector::Zero(static_cast<Eigen::Index>(fock.slot_count()));
  Vector cre = ann;
  const auto s = static_cast<Eigen::Index>(FockSpace::slot(mode, mu));
  std::string label;
  if (kind == LadderKind::Annihilate) {
    ann(s) = 1.0;
    label = "a_" + std::to_string(mu) + "(k" + std::to_string(mode) + ")";
  } else {
    cre(s) = 1.0;
    label = "a^ddagger_" + std::to_string(mu) + "(k" + std::to_string(mode) + ")";
  }
  return LinearField(std::move(ann), std::move(cre)).to_operator(fock, std::move(label));
}

LinearField potential_form(const MomentumLattice& lattice, int mu, const TestFunction& f) {
  check_modes(lattice, f);
  Vector ann = Vector::Zero(static_cast<Eigen::Index>(4 * lattice.size()));
  Vector cre = ann;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const auto s = static_cast<Eigen::Index>(FockSpace::slot(m, mu));
    const cplx a = f.amplitude(m, mu) * lattice.normalization(m);
    ann(s) = a;
    cre(s) = std::conj(a);
  }
  return LinearField(std::move(ann), std::move(cre));
}

LinearField field_strength_form(const MomentumLattice& lattice, int mu, int nu, const TestFunction& f) {
  return potential_form(lattice, mu, f).derivative(lattice, nu) - potential_form(lattice, nu, f).derivative(lattice, mu);
}

LinearField gauge_form(const MomentumLattice& lattice, const TestFunction& f) {
  LinearField b(4 * lattice.size());
  for (int mu = 0; mu < 4; ++mu) b += potential_form(lattice, mu, f).raised_derivative(lattice, mu);
  return b;
}

LinearField maxwell_form(const MomentumLattice& lattice, int mu, const TestFunction& f) {
  LinearField g(4 * lattice.size());
  for (int nu = 0; nu < 4; ++nu) g += field_strength_form(lattice, nu, mu, f).raised_derivative(lattice, nu);
  return g;
}

FieldOperator field_A(const FockSpace& fock, int mu, const TestFunction& f) {
  return potential_form(fock.lattice(), mu, f).to_operator(fock, "A_" + std::to_string(mu) + "(f)");
}

FieldOperator field_F(const FockSpace& fock, int mu, int nu, const TestFunction& f) {
  return field_strength_form(fock.lattice(), mu, nu, f)
      .to_operator(fock, "F_" + std::to_string(mu) + std::to_string(nu) + "(f)");
}

GaugeFieldOperators field_B(const FockSpace& fock, const TestFunction& f) {
  const LinearField b = gauge_form(fock.lattice(), f);
  GaugeFieldOperators out{b.to_operator(fock, "B(f)"), b.annihilation_part().to_operator(fock, "B+(f)"), {}};
  out.minus = krein_adjoint(fock, out.plus);
  out.minus.label = "B-(f)";
  return out;
}

FieldOperator b_plus_mode(const FockSpace& fock, std::size_t mode) {
  const TestFunction unit = TestFunction::mode_indicator(fock.lattice(), mode);
  return gauge_form(fock.lattice(), unit).annihilation_part().to_operator(fock, "B+(k" + std::to_string(mode) + ")");
}

FieldOperator momentum_operator(const FockSpace& fock, int mu) {
  const auto d = static_cast<Eigen::Index>(fock.dim());
  SparseMatrix m(d, d);
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t i = 0; i < fock.dim(); ++i) {
    const double p = fock.state_momentum(i)(mu);
    if (p != 0.0) t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), p);
  }
  m.setFromTriplets(t.begin(), t.end());
  return {std::move(m), "P^" + std::to_string(mu)};
}

FieldOperator translation(const FockSpace& fock, const FourVector& a) {
  const auto d = static_cast<Eigen::Index>(fock.dim());
  SparseMatrix m(d, d);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(fock.dim());
  for (std::size_t i = 0; i < fock.dim(); ++i) {
    const double phase = minkowski(a, fock.state_momentum(i));
    t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), cplx{std::cos(phase), std::sin(phase)});
  }
  m.setFromTriplets(t.begin(), t.end());
  return {std::move(m), "U(a)"};
}

SpectralReport spectral_report(const FockSpace& fock, double tol) {
  SpectralReport r;
  r.min_mass_squared = 0.0;
  r.min_energy = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < fock.dim(); ++i) {
    const FourVector p = fock.state_momentum(i);
    const double m2 = minkowski(p, p);
    if (first || m2 < r.min_mass_squared) r.min_mass_squared = m2;
    if (first || p(0) < r.min_energy) r.min_energy = p(0);
    first = false;
  }
  r.pass = r.min_mass_squared >= -tol && r.min_energy >= -tol;
  return r;
}

bool spectral_check(const FockSpace& fock, double tol) { return spectral_report(fock, tol).pass; }

std::size_t zero_energy_states(const FockSpace& fock, double tol) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < fock.dim(); ++i)
    if (std::abs(fock.state_momentum(i)(0)) <= tol) ++n;
  return n;
}

std::size_t below_cap(const FockSpace& fock) { return fock.sector_begin(fock.n_max()); }

Matrix restricted_commutator(const FockSpace& fock, const FieldOperator& x, const FieldOperator& y) {
  const auto cols = static_cast<Eigen::Index>(below_cap(fock));
  const Matrix yb = Matrix(y.matrix).leftCols(cols);
  const Matrix xb = Matrix(x.matrix).leftCols(cols);
  return Matrix(x.matrix * yb) - Matrix(y.matrix * xb);
}

gns::WightmanFunctional wightman_from_fock(const FockSpace& fock, const std::vector<FieldOperator>& letters,
                                           int max_degree, std::vector<int> star) {
  const int b = static_cast<int>(letters.size());
  gns::AlgebraBasis basis(b, max_degree, std::move(star));
  gns::WightmanFunctional w(basis);
  const auto d = static_cast<Eigen::Index>(fock.dim());

  // vectors[r] = L_{w_1} ... L_{w_n} Omega for the word of rank r in degree n
  std::vector<Vector> previous{Vector::Unit(d, static_cast<Eigen::Index>(fock.vacuum()))};
  for (int n = 1; n <= max_degree; ++n) {
    std::vector<Vector> current(basis.words_of_degree(n));
    const std::size_t tail = basis.words_of_degree(n - 1);
    for (int l = 0; l < b; ++l) {
      for (std::size_t r = 0; r < tail; ++r) {
        const std::size_t rank = static_cast<std::size_t>(l) * tail + r;
        current[rank] = letters[static_cast<std::size_t>(l)].matrix * previous[r];
        w.restriction(n)(static_cast<Eigen::Index>(rank)) =
            fock.eta()(static_cast<Eigen::Index>(fock.vacuum())) * current[rank](static_cast<Eigen::Index>(fock.vacuum()));
      }
    }
    previous = std::move(current);
  }
  w.set_hermitian_flag(gns::hermiticity_check(w, 1e-10));
  return w;
}

}  // namespace kreinfield::fock
