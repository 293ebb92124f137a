#pragma once

#include <array>

#include <Eigen/Core>

#include "kreinfield/linalg.hpp"

namespace kreinfield {

/// Contravariant four-vector (p^0, p^1, p^2, p^3).
using FourVector = Eigen::Vector4d;

/// Minkowski metric g = diag(+1, -1, -1, -1).
constexpr double metric(int mu, int nu) noexcept { return mu != nu ? 0.0 : (mu == 0 ? 1.0 : -1.0); }

inline double minkowski(const FourVector& a, const FourVector& b) {
  return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
}

/// p_mu = g_{mu nu} p^nu.
inline FourVector lower(const FourVector& p) { return {p(0), -p(1), -p(2), -p(3)}; }

/// Momentum-space smearing profile of a test function.
///
/// Gaussian: the position-space profile exp(-|x - c|^2 / sigma^2) (Euclidean norm on
/// R^4), whose transform is exp(-sigma^2 (p0^2 + |p|^2) / 4) exp(-i p.c) up to a
/// constant. Shell: a smooth bump in |p| supported on |(|p| - radius)| < width, with
/// the same translation phase. Components c_mu multiply the profile for the
/// mu-th Lorentz index.
struct TestProfile {
  enum class Kind { Gaussian, Shell };

  Kind kind = Kind::Gaussian;
  FourVector center = FourVector::Zero();
  double width = 1.0;
  double radius = 0.0;  // shell only
  double time_width = -1.0;  // Gaussian temporal width; negative means equal to width
  std::array<cplx, 4> components{cplx{1.0}, cplx{1.0}, cplx{1.0}, cplx{1.0}};
  bool negative_frequency_only = false;

  static TestProfile gaussian(const FourVector& center, double width);
  static TestProfile shell(double radius, double width, const FourVector& center = FourVector::Zero());

  /// Scalar profile value at momentum p (components not applied).
  cplx scalar(const FourVector& p) const;
  cplx amplitude(int mu, const FourVector& p) const { return components[static_cast<std::size_t>(mu)] * scalar(p); }

  /// Real position-space profile with real components.
  bool real() const;

  TestProfile translated(const FourVector& a) const;
};

}  // namespace kreinfield
