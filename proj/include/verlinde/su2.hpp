#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <boost/multiprecision/cpp_int.hpp>

#include "verlinde/error.hpp"

namespace verlinde {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

namespace detail {

inline double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// Basis e_m = sqrt(C(n,m)) x^{n-m} y^m, m = 0..n; (rho(g)P)(u) = P(u g).
inline CMatrix rep_matrix(int n, const Mat2& g) {
  if (n < 0) throw DomainError("twice-spin must be >= 0");
  if (std::abs(g.determinant() - Complex(1)) > 1e-12) throw DomainError("rep_matrix needs det g = 1");
  const Complex a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  CMatrix R = CMatrix::Zero(n + 1, n + 1);
  std::vector<Complex> pa(n + 1, 1), pb(n + 1, 1), pc(n + 1, 1), pd(n + 1, 1);
  for (int i = 1; i <= n; ++i) {
    pa[i] = pa[i - 1] * a;
    pb[i] = pb[i - 1] * b;
    pc[i] = pc[i - 1] * c;
    pd[i] = pd[i - 1] * d;
  }
  for (int m = 0; m <= n; ++m)
    for (int i = 0; i <= n - m; ++i)
      for (int j = 0; j <= m; ++j) {
        const int l = i + j;
        R(l, m) += detail::binom(n - m, i) * detail::binom(m, j) * pa[n - m - i] * pc[i] * pb[m - j] * pd[j];
      }
  for (int l = 0; l <= n; ++l)
    for (int m = 0; m <= n; ++m) R(l, m) *= std::sqrt(detail::binom(n, m) / detail::binom(n, l));
  return R;
}

// Derivative of rep_matrix at the identity, complex linear in X.
inline CMatrix lie_rep(int n, const Mat2& X) {
  CMatrix R = CMatrix::Zero(n + 1, n + 1);
  for (int m = 0; m <= n; ++m) {
    R(m, m) += double(n - m) * X(0, 0) + double(m) * X(1, 1);
    if (m < n) R(m + 1, m) += double(n - m) * X(1, 0);
    if (m > 0) R(m - 1, m) += double(m) * X(0, 1);
  }
  for (int l = 0; l <= n; ++l)
    for (int m = 0; m <= n; ++m) R(l, m) *= std::sqrt(detail::binom(n, m) / detail::binom(n, l));
  return R;
}

inline const std::array<Mat2, 3>& pauli() {
  static const std::array<Mat2, 3> s = [] {
    std::array<Mat2, 3> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    p[2] << 1, 0, 0, -1;
    return p;
  }();
  return s;
}

// Hermitian spin operators J_mu = d rho(sigma_mu / 2).
inline std::array<CMatrix, 3> spin_operators(int n) {
  std::array<CMatrix, 3> J;
  for (int mu = 0; mu < 3; ++mu) J[mu] = lie_rep(n, pauli()[mu] / 2.0);
  return J;
}

inline boost::multiprecision::cpp_rational casimir(int n) {
  if (n < 0) throw DomainError("twice-spin must be >= 0");
  return boost::multiprecision::cpp_rational(n * (n + 2), 4);
}

inline Complex character(int n, const Mat2& g) { return rep_matrix(n, g).trace(); }

inline Mat2 su2_from_quaternion(double a, double b, double c, double d) {
  const double r = std::sqrt(a * a + b * b + c * c + d * d);
  a /= r, b /= r, c /= r, d /= r;
  Mat2 g;
  g << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return g;
}

template <class Rng>
Mat2 haar_su2(Rng& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  double a = N(rng), b = N(rng), c = N(rng), d = N(rng);
  return su2_from_quaternion(a, b, c, d);
}

inline Mat2 diag_su2(double theta) {
  Mat2 g = Mat2::Zero();
  g(0, 0) = std::polar(1.0, theta);
  g(1, 1) = std::polar(1.0, -theta);
  return g;
}

inline bool cg_admissible(int a, int b, int c) {
  return a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && a <= b + c && b <= a + c;
}

// Invariant tensor in V_{n1} (x) V_{n2} (x) V_{n3}; index (i1 * (n2+1) + i2) * (n3+1) + i3.
inline const CVector& wigner_3j(int n1, int n2, int n3) {
  if (!cg_admissible(n1, n2, n3))
    throw AdmissibilityError("triple (" + std::to_string(n1) + "," + std::to_string(n2) + "," + std::to_string(n3) +
                             ") is not Clebsch-Gordan admissible");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, CVector> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n1, n2, n3);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const int d1 = n1 + 1, d2 = n2 + 1, d3 = n3 + 1, D = d1 * d2 * d3;
  auto J1 = spin_operators(n1), J2 = spin_operators(n2), J3 = spin_operators(n3);
  CMatrix H = CMatrix::Zero(D, D);
  for (int m = 0; m < 3; ++m) {
    CMatrix A = Eigen::kroneckerProduct(Eigen::kroneckerProduct(J1[m], CMatrix::Identity(d2, d2)).eval(),
                                        CMatrix::Identity(d3, d3))
                    .eval();
    A += Eigen::kroneckerProduct(Eigen::kroneckerProduct(CMatrix::Identity(d1, d1), J2[m]).eval(),
                                 CMatrix::Identity(d3, d3));
    A += Eigen::kroneckerProduct(CMatrix::Identity(d1 * d2, d1 * d2), J3[m]);
    H += A.adjoint() * A;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (D > 1 && es.eigenvalues()(1) < 1e-6) throw InvariantViolation("invariant subspace is not one dimensional");
  if (es.eigenvalues()(0) > 1e-8) throw InvariantViolation("no invariant tensor found");
  CVector v = es.eigenvectors().col(0);
  v.normalize();
  for (int i = 0; i < D; ++i)
    if (std::abs(v(i)) > 1e-10) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  return memo.emplace(key, v).first->second;
}

}  // namespace verlinde
