#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "verlinde/error.hpp"
#include "verlinde/su2.hpp"

namespace verlinde {

using PeriodMatrix = Eigen::MatrixXcd;
using CVec = std::vector<Complex>;

inline void validate_period_matrix(const PeriodMatrix& W) {
  if (W.rows() != W.cols() || W.rows() == 0) throw DomainError("period matrix must be square and nonempty");
  if ((W - W.transpose()).norm() > 1e-12) throw DomainError("period matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(W.imag());
  if (llt.info() != Eigen::Success) throw DomainError("Im(period matrix) is not positive definite");
}

struct ThetaCharacteristic {
  int level = 1;
  std::vector<int> l;
};

inline void validate_characteristic(const ThetaCharacteristic& c, int g) {
  if (c.level < 1) throw DomainError("level must be positive");
  if (static_cast<int>(c.l.size()) != g) throw DomainError("characteristic length must equal genus");
  for (int x : c.l)
    if (x < 0 || x >= c.level) throw DomainError("characteristic entries must lie in [0, k)");
}

struct LatticeSum {
  Complex value;
  int radius = 0;
  double tail_bound = 0;  // relative to the largest term
};

namespace detail {

constexpr int kMaxRadius = 60;

// sum over m in l + k Z^g of exp(pi i m.A.m + 2 pi i m.z), box |n - n_c| <= R
inline Complex coset_gaussian_box(const std::vector<int>& l, int k, const PeriodMatrix& A, const CVec& z,
                                  const std::vector<long long>& center, int R) {
  const int g = static_cast<int>(l.size());
  std::vector<long long> n(g);
  for (int i = 0; i < g; ++i) n[i] = center[i] - R;
  Complex total = 0;
  const Complex I(0, 1);
  std::vector<double> m(g);
  while (true) {
    for (int i = 0; i < g; ++i) m[i] = l[i] + static_cast<double>(k) * n[i];
    Complex q = 0, lin = 0;
    for (int i = 0; i < g; ++i) {
      lin += m[i] * z[i];
      for (int j = 0; j < g; ++j) q += m[i] * A(i, j) * m[j];
    }
    total += std::exp(std::numbers::pi * I * q + 2 * std::numbers::pi * I * lin);
    int i = g - 1;
    while (i >= 0 && ++n[i] > center[i] + R) n[i] = center[i] - R, --i;
    if (i < 0) break;
  }
  return total;
}

}  // namespace detail

// Sum over m in l + kZ^g of exp(pi i m.A.m + 2 pi i m.z) with Im A > 0.
// The radius is the smallest with Gaussian tail bound below tol / 10,
// measured relative to the largest term.
inline LatticeSum coset_gaussian_sum(const std::vector<int>& l, int k, const PeriodMatrix& A, const CVec& z,
                                     double tol = 1e-12, std::optional<int> fixed_radius = std::nullopt) {
  const int g = static_cast<int>(l.size());
  if (static_cast<int>(z.size()) != g) throw DomainError("argument length must equal genus");
  Eigen::MatrixXd Y = A.imag();
  Eigen::LLT<Eigen::MatrixXd> llt(Y);
  if (llt.info() != Eigen::Success) throw DomainError("imaginary part is not positive definite");
  Eigen::VectorXd y(g);
  for (int i = 0; i < g; ++i) y(i) = z[i].imag();
  // |term| = C exp(-pi (m - m*) Y (m - m*)), m* = -Y^{-1} y
  Eigen::VectorXd mstar = -llt.solve(y);
  std::vector<long long> center(g);
  for (int i = 0; i < g; ++i) center[i] = std::llround((mstar(i) - l[i]) / k);
  const double lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Y).eigenvalues().minCoeff();
  auto tail = [&](int R) {
    double s = 0;
    for (int sh = R + 1; sh < R + 200; ++sh) {
      const double dist = k * (sh - 0.5);
      const double count = 2.0 * g * std::pow(2.0 * sh + 1, g - 1);
      const double term = count * std::exp(-std::numbers::pi * lam * dist * dist);
      s += term;
      if (term < 1e-30 * (s + 1e-300)) break;
    }
    return s;
  };
  int R = 0;
  if (fixed_radius) {
    R = *fixed_radius;
  } else {
    while (tail(R) > tol / 10) {
      if (++R > detail::kMaxRadius) throw ConvergenceError("truncation radius would exceed the cap of 60");
    }
  }
  LatticeSum out;
  out.radius = R;
  out.tail_bound = tail(R);
  out.value = detail::coset_gaussian_box(l, k, A, z, center, R);
  return out;
}

inline LatticeSum theta_char_detail(const ThetaCharacteristic& c, const PeriodMatrix& W, const CVec& z,
                                    double tol = 1e-12, std::optional<int> radius = std::nullopt) {
  validate_period_matrix(W);
  validate_characteristic(c, static_cast<int>(W.rows()));
  return coset_gaussian_sum(c.l, c.level, W / double(c.level), z, tol, radius);
}

inline Complex theta_char(const ThetaCharacteristic& c, const PeriodMatrix& W, const CVec& z, double tol = 1e-12) {
  return theta_char_detail(c, W, z, tol).value;
}

// exp(-pi i k W_ii - 2 pi i k z_i)
inline Complex quasi_period_factor(int k, const PeriodMatrix& W, const CVec& z, int i) {
  const Complex I(0, 1);
  return std::exp(-std::numbers::pi * I * double(k) * W(i, i) - 2 * std::numbers::pi * I * double(k) * z[i]);
}

// Fourier series on U(1)^g: finite coefficients plus an optional all-ones coset l + kZ^g.
struct FourierSeries {
  int genus = 1;
  std::map<std::vector<int>, Complex> coeffs;
  struct Coset {
    std::vector<int> l;
    int k = 1;
  };
  std::optional<Coset> coset;
  // declared distribution class |a_n| <= bound (1 + n.n)^order
  std::optional<int> growth_order;
  double growth_bound = 1;

  bool is_distribution() const { return coset.has_value() || growth_order.has_value(); }

  void check_growth() const {
    if (!growth_order) return;
    for (const auto& [n, a] : coeffs) {
      double nn = 0;
      for (int x : n) nn += double(x) * x;
      if (std::abs(a) > growth_bound * std::pow(1 + nn, *growth_order))
        throw DomainError("coefficient exceeds the declared growth class");
    }
  }

  Complex evaluate(const CVec& x) const {
    if (coset) throw DomainError("a distribution has no pointwise values");
    Complex s = 0;
    for (const auto& [n, a] : coeffs) {
      Complex d = 0;
      for (int i = 0; i < genus; ++i) d += double(n[i]) * x[i];
      s += a * std::exp(Complex(0, 2 * std::numbers::pi) * d);
    }
    return s;
  }
};

inline FourierSeries delta_distribution(const std::vector<int>& l, int k) {
  if (k < 1) throw DomainError("level must be positive");
  for (int x : l)
    if (x < 0 || x >= k) throw DomainError("characteristic entries must lie in [0, k)");
  FourierSeries f;
  f.genus = static_cast<int>(l.size());
  f.coset = FourierSeries::Coset{l, k};
  f.growth_order = 0;
  return f;
}

// Coefficientwise pairing sum_n d_n p_n against a Fourier polynomial.
inline Complex pair_with_polynomial(const FourierSeries& d, const FourierSeries& p) {
  if (p.coset) throw DomainError("second argument must be a Fourier polynomial");
  Complex s = 0;
  for (const auto& [n, a] : p.coeffs) {
    bool in = false;
    if (d.coset) {
      in = true;
      for (int i = 0; i < d.genus; ++i) {
        const int r = ((n[i] - d.coset->l[i]) % d.coset->k + d.coset->k) % d.coset->k;
        in = in && r == 0;
      }
    }
    Complex dn = in ? Complex(1) : Complex(0);
    auto it = d.coeffs.find(n);
    if (it != d.coeffs.end()) dn += it->second;
    s += dn * a;
  }
  return s;
}

// a_n -> a_n exp(t i pi n.W.n); holomorphic evaluation included.
struct AbelianCST {
  FourierSeries source;
  PeriodMatrix W;
  double t = 0;

  std::map<std::vector<int>, Complex> coefficients() const {
    std::map<std::vector<int>, Complex> out;
    for (const auto& [n, a] : source.coeffs) out[n] = a * multiplier(n);
    return out;
  }

  Complex multiplier(const std::vector<int>& n) const {
    Complex q = 0;
    for (int i = 0; i < source.genus; ++i)
      for (int j = 0; j < source.genus; ++j) q += double(n[i]) * W(i, j) * double(n[j]);
    return std::exp(Complex(0, t * std::numbers::pi) * q);
  }

  Complex evaluate(const CVec& z, double tol = 1e-12) const {
    Complex s = 0;
    for (const auto& [n, a] : coefficients()) {
      Complex d = 0;
      for (int i = 0; i < source.genus; ++i) d += double(n[i]) * z[i];
      s += a * std::exp(Complex(0, 2 * std::numbers::pi) * d);
    }
    if (source.coset) {
      if (t <= 0) throw DomainError("a distribution needs t > 0");
      s += coset_gaussian_sum(source.coset->l, source.coset->k, W * t, z, tol).value;
    }
    return s;
  }
};

inline AbelianCST abelian_cst(const FourierSeries& f, const PeriodMatrix& W, double t) {
  if (t < 0) throw DomainError("t must be >= 0");
  validate_period_matrix(W);
  if (W.rows() != f.genus) throw DomainError("genus mismatch");
  f.check_growth();
  return {f, W, t};
}

// Jacobi theta_3(0 | i y) = prod (1 - q^{2m})(1 + q^{2m-1})^2, q = e^{-pi y}.
inline double jacobi_theta3_product(double y, int terms = 200) {
  const double q = std::exp(-std::numbers::pi * y);
  double p = 1;
  for (int m = 1; m <= terms; ++m) {
    p *= (1 - std::pow(q, 2 * m)) * std::pow(1 + std::pow(q, 2 * m - 1), 2);
  }
  return p;
}

}  // namespace verlinde
