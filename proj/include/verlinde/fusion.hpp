#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "verlinde/error.hpp"

namespace verlinde {

using BigInt = boost::multiprecision::cpp_int;

// Labels are twice-spins n in {0, ..., k}.  A LabelVector is a multiset.
using LabelVector = std::vector<int>;

inline std::vector<int> clebsch_gordan(int a, int b) {
  if (a < 0 || b < 0) throw DomainError("labels must be nonnegative");
  std::vector<int> out;
  for (int c = a + b; c >= std::abs(a - b); c -= 2) out.push_back(c);
  return out;
}

inline std::vector<int> fuse(int k, int a, int b) {
  if (k < 1) throw DomainError("level must be positive");
  if (a < 0 || a > k || b < 0 || b > k) throw DomainError("label out of range for level " + std::to_string(k));
  std::vector<int> out;
  for (int c = std::min(a + b, 2 * k - a - b); c >= std::abs(a - b); c -= 2) out.push_back(c);
  return out;
}

inline bool fusion_admissible(int k, int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a > k || b > k || c > k) return false;
  if ((a + b + c) % 2) return false;
  if (c < std::abs(a - b) || c > a + b) return false;
  return a + b + c <= 2 * k;
}

class FusionRing {
 public:
  explicit FusionRing(int k) : k_(k) {
    if (k < 1) throw DomainError("level must be positive");
    const int n = k + 1;
    table_.assign(static_cast<std::size_t>(n) * n * n, 0);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b)
        for (int c : fuse(k, a, b)) table_[(a * n + b) * n + c] = 1;
  }

  int level() const { return k_; }
  int size() const { return k_ + 1; }

  int N(int a, int b, int c) const {
    const int n = k_ + 1;
    if (a < 0 || b < 0 || c < 0 || a > k_ || b > k_ || c > k_) return 0;
    return table_[(a * n + b) * n + c];
  }

  using Element = std::vector<BigInt>;

  Element basis(int a) const {
    Element e(size(), 0);
    e.at(a) = 1;
    return e;
  }

  Element multiply(const Element& x, const Element& y) const {
    Element z(size(), 0);
    for (int a = 0; a <= k_; ++a) {
      if (x[a] == 0) continue;
      for (int b = 0; b <= k_; ++b) {
        if (y[b] == 0) continue;
        BigInt p = x[a] * y[b];
        for (int c = 0; c <= k_; ++c)
          if (N(a, b, c)) z[c] += p;
      }
    }
    return z;
  }

  // The handle element sum_n n*n.
  Element handle() const {
    Element h(size(), 0);
    for (int n = 0; n <= k_; ++n)
      for (int c = 0; c <= k_; ++c) h[c] += N(n, n, c);
    return h;
  }

  // rk_g(N): multiplicity of the unit in c^g times the product of labels.
  BigInt rk(int g, const LabelVector& labels = {}) const {
    if (g < 0) throw DomainError("genus must be nonnegative");
    Element x = basis(0);
    for (int a : labels) {
      if (a < 0 || a > k_) throw DomainError("label out of range");
      x = multiply(x, basis(a));
    }
    Element h = handle();
    for (int i = 0; i < g; ++i) x = multiply(x, h);
    return x[0];
  }

  // The genus recursion taken literally: rk_g(N) = sum_n rk_{g-1}(N + n + n),
  // with rk_0 by iterated fusion.
  BigInt rk_recursive(int g, const LabelVector& labels = {}) const {
    if (g == 0) {
      Element x = basis(0);
      for (int a : labels) x = multiply(x, basis(a));
      return x[0];
    }
    BigInt total = 0;
    for (int n = 0; n <= k_; ++n) {
      LabelVector next = labels;
      next.push_back(n);
      next.push_back(n);
      total += rk_recursive(g - 1, next);
    }
    return total;
  }

 private:
  int k_;
  std::vector<std::uint8_t> table_;
};

// ---------------------------------------------------------------------------
// characters

inline double character(int k, int n, int m) {
  if (n < 1 || n > k + 1) throw DomainError("character index out of range");
  if (m < 0 || m > k) throw DomainError("label out of range");
  const double x = std::numbers::pi / (k + 2);
  return std::sin((m + 1) * n * x) / std::sin(n * x);
}

inline double chi_c(int k, int n) {
  if (n < 1 || n > k + 1) throw DomainError("character index out of range");
  const double s = std::sin(n * std::numbers::pi / (k + 2));
  return (k + 2) / (2.0 * s * s);
}

inline double chi_c_direct(int k, int n) {
  double t = 0;
  for (int m = 0; m <= k; ++m) {
    double c = character(k, n, m);
    t += c * c;
  }
  return t;
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0, comp_ = 0;
};

inline double verlinde_characters_raw(int g, int k) {
  CompensatedSum s;
  for (int n = 1; n <= k + 1; ++n) s.add(std::pow(chi_c_direct(k, n), g - 1));
  return s.value();
}

inline double verlinde_closed_raw(int g, int k) {
  CompensatedSum s;
  for (int n = 1; n <= k + 1; ++n) s.add(std::pow(std::sin(n * std::numbers::pi / (k + 2)), 2 - 2 * g));
  return std::pow((k + 2) / 2.0, g - 1) * s.value();
}

inline BigInt round_checked(double x, const std::string& what) {
  if (!(std::abs(x) < 9.0e15)) throw ResourceLimit(what + " exceeds double precision range");
  double r = std::round(x);
  // trig sums lose ~1e-14 relative; large values need a relative slack
  const double slack = std::max(1e-6, 1e-13 * std::abs(x));
  if (std::abs(x - r) > slack)
    throw InvariantViolation(what + " is not within " + std::to_string(slack) + " of an integer: " + std::to_string(x));
  return BigInt(static_cast<long long>(r));
}

struct IdealReport {
  int level = 0;
  int pairs = 0;
  int mismatches = 0;
  bool commutative = true;
  bool associative = true;
  double character_residual = 0;
};

// Fusion as Clebsch-Gordan in Z[x] (V_n the Chebyshev polynomials)
// reduced modulo V_{k+1}.
inline IdealReport ideal_check(int k) {
  if (k < 1 || k > 12) throw DomainError("ideal_check supports 1 <= k <= 12");
  using Poly = std::vector<long long>;  // coefficient of x^i
  const int maxdeg = 2 * k + 2;
  std::vector<Poly> V(maxdeg + 1, Poly(maxdeg + 2, 0));
  V[0][0] = 1;
  V[1][1] = 1;
  for (int n = 1; n < maxdeg; ++n)
    for (int i = 0; i <= maxdeg; ++i) V[n + 1][i + 1] += V[n][i], V[n + 1][i] -= V[n - 1][i];
  auto degree = [](const Poly& p) {
    int d = static_cast<int>(p.size()) - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
  };
  const Poly& ideal = V[k + 1];  // monic of degree k+1
  FusionRing ring(k);
  IdealReport rep;
  rep.level = k;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= k; ++b) {
      ++rep.pairs;
      Poly p(maxdeg + 2, 0);
      for (int c : clebsch_gordan(a, b))
        for (int i = 0; i <= maxdeg; ++i) p[i] += V[c][i];
      for (int d = degree(p); d > k; d = degree(p)) {
        long long lead = p[d];
        for (int i = 0; i <= k + 1; ++i) p[i + d - k - 1] -= lead * ideal[i];
      }
      std::vector<long long> coeff(k + 1, 0);
      for (int d = degree(p); d >= 0; d = degree(p)) {
        long long lead = p[d];
        coeff[d] = lead;
        for (int i = 0; i <= d; ++i) p[i] -= lead * V[d][i];
      }
      for (int c = 0; c <= k; ++c)
        if (coeff[c] != ring.N(a, b, c)) {
          ++rep.mismatches;
          break;
        }
    }
  }
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) {
      for (int c = 0; c <= k; ++c)
        if (ring.N(a, b, c) != ring.N(b, a, c)) rep.commutative = false;
      for (int c = 0; c <= k; ++c) {
        auto left = ring.multiply(ring.multiply(ring.basis(a), ring.basis(b)), ring.basis(c));
        auto right = ring.multiply(ring.basis(a), ring.multiply(ring.basis(b), ring.basis(c)));
        if (left != right) rep.associative = false;
      }
      for (int n = 1; n <= k + 1; ++n) {
        double lhs = character(k, n, a) * character(k, n, b);
        double rhs = 0;
        for (int c = 0; c <= k; ++c) rhs += ring.N(a, b, c) * character(k, n, c);
        rep.character_residual = std::max(rep.character_residual, std::abs(lhs - rhs));
      }
    }
  return rep;
}

}  // namespace verlinde
