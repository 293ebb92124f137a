#include "kreinfield/profile.hpp"

#include <cmath>

namespace kreinfield {

TestProfile TestProfile::gaussian(const FourVector& center, double width) {
  TestProfile p;
  p.center = center;
  p.width = width;
  return p;
}

TestProfile TestProfile::shell(double radius, double width, const FourVector& center) {
  TestProfile p;
  p.kind = Kind::Shell;
  p.radius = radius;
  p.width = width;
  p.center = center;
  return p;
}

cplx TestProfile::scalar(const FourVector& p) const {
  if (negative_frequency_only && p(0) > 0.0) return {0.0, 0.0};
  const double spatial2 = p.tail<3>().squaredNorm();
  double envelope = 0.0;
  if (kind == Kind::Gaussian) {
    const double st = time_width < 0.0 ? width : time_width;
    envelope = std::exp(-(st * st * p(0) * p(0) + width * width * spatial2) / 4.0);
  } else {
    const double u = (std::sqrt(spatial2) - radius) / width;
    if (std::abs(u) >= 1.0) return {0.0, 0.0};
    envelope = std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  const double phase = -minkowski(p, center);
  return envelope * cplx{std::cos(phase), std::sin(phase)};
}

bool TestProfile::real() const {
  for (const cplx& c : components)
    if (c.imag() != 0.0) return false;
  return !negative_frequency_only;
}

TestProfile TestProfile::translated(const FourVector& a) const {
  TestProfile out = *this;
  out.center += a;
  return out;
}

}  // namespace kreinfield
