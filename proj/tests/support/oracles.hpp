#pragma once

// Reference computations that share no code path with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Cyclic Jacobi rotations on a real symmetric matrix; returns sorted eigenvalues.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100) {
  const Eigen::Index n = a.rows();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

/// Eigenvalues of a Hermitian matrix via the real embedding [[Re, -Im], [Im, Re]]:
/// every eigenvalue appears twice there, so every second one is kept.
inline std::vector<double> hermitian_eigenvalues(const Matrix& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r << h.real(), -h.imag(), h.imag(), h.real();
  const std::vector<double> doubled = jacobi_eigenvalues(r);
  std::vector<double> out;
  for (std::size_t i = 0; i < doubled.size(); i += 2) out.push_back(0.5 * (doubled[i] + doubled[i + 1]));
  return out;
}

struct Inertia {
  std::size_t plus = 0, zero = 0, minus = 0;
};

inline Inertia inertia(const Matrix& h, double tol) {
  Inertia in;
  for (double v : hermitian_eigenvalues(h)) {
    if (v > tol) ++in.plus;
    else if (v < -tol) ++in.minus;
    else ++in.zero;
  }
  return in;
}

/// Kernel dimension via full-pivot LU.
inline Eigen::Index kernel_dim(const Matrix& a, double threshold) {
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(threshold);
  return a.cols() - lu.rank();
}

inline Matrix kernel(const Matrix& a, double threshold) {
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(threshold);
  if (lu.rank() == a.cols()) return Matrix(a.cols(), 0);
  return lu.kernel();
}

/// Largest singular value by power iteration on A^H A.
inline double power_norm(const Matrix& a, std::mt19937_64& rng, int iterations = 2000) {
  std::normal_distribution<double> n01;
  Vector v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(n01(rng), n01(rng));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = a.adjoint() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    sigma = std::sqrt(nw);
  }
  return sigma;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                               int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double e, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * e) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * e, d - 1) + rec(mid, hi, fmid, frm, fhi, right, 0.5 * e, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(n01(rng), n01(rng));
  return m;
}

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

inline Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

/// Hermitian matrix of the given rank.
inline Matrix random_hermitian_rank(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  const Matrix b = random_matrix(n, rank, rng);
  std::uniform_int_distribution<int> coin(0, 1);
  Eigen::VectorXd signs(rank);
  for (Eigen::Index i = 0; i < rank; ++i) signs(i) = coin(rng) ? 1.0 : -1.0;
  return b * signs.cast<cplx>().asDiagonal() * b.adjoint();
}

inline Matrix random_pd(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix m = random_matrix(n, n, rng);
  return m * m.adjoint() + static_cast<double>(n) * Matrix::Identity(n, n);
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
