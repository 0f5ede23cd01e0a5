#pragma once

#include <mutex>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "verlinde/error.hpp"
#include "verlinde/fusion.hpp"

namespace verlinde {

using NewsteadRational = boost::multiprecision::cpp_rational;

// alpha^a beta^b gamma^c
struct NewsteadMonomial {
  int a = 0;
  int b = 0;
  int c = 0;

  int degree() const { return a + 2 * b + 3 * c; }
  bool operator==(const NewsteadMonomial&) const = default;
};

class BernoulliCache {
 public:
  NewsteadRational get(int n) {
    if (n < 0) throw DomainError("bernoulli index must be >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(B_.size()) <= n) {
      const int m = static_cast<int>(B_.size());
      if (m == 0) {
        B_.push_back(1);
        continue;
      }
      // sum_{j<=m} C(m+1, j) B_j = 0
      NewsteadRational s = 0;
      BigInt binom = 1;
      for (int j = 0; j < m; ++j) {
        s += NewsteadRational(binom) * B_[j];
        binom = binom * (m + 1 - j) / (j + 1);
      }
      B_.push_back(-s / NewsteadRational(m + 1));
    }
    return B_[n];
  }

 private:
  std::mutex mu_;
  std::vector<NewsteadRational> B_;
};

inline BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

inline NewsteadRational bernoulli(int n) { return bernoulli_cache().get(n); }

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct N0Value {
  NewsteadRational value;
  bool kappa_zero = false;  // evaluated through the B_0 term (4^0 - 2 = -1)
};

// N^0(alpha^a omega^n), a = 3 kappa.
inline N0Value n0(int a, int n) {
  if (a < 0 || n < 0) throw DomainError("n0 needs nonnegative exponents");
  if (a % 3) throw DomainError("alpha exponent must be divisible by 3");
  const int kappa = a / 3;
  BigInt p4 = 1;
  for (int i = 0; i < kappa; ++i) p4 *= 4;
  NewsteadRational v = NewsteadRational(factorial(n + 3 * kappa), factorial(n + kappa + 1));
  BigInt sign = (n + kappa) % 2 ? -1 : 1;
  BigInt pow4 = 1;
  for (int i = 0; i < n + kappa; ++i) pow4 *= 4;
  v *= NewsteadRational(sign * pow4 * factorial(2 * kappa) * (p4 - 2));
  v *= bernoulli(2 * kappa);
  return {v, kappa == 0};
}

// gamma-free normalized value; alpha^a beta^b = alpha^{a-b} omega^b.
inline N0Value normalized_newstead(const NewsteadMonomial& m) {
  if (m.a < 0 || m.b < 0 || m.c < 0) throw DomainError("negative exponent");
  if (m.degree() % 3) return {0, false};
  if (m.a < m.b) throw DomainError("alpha^a beta^b with a < b has no alpha-omega reduced form");
  return n0(m.a - m.b, m.b);
}

// N_g of a degree 3g-3 monomial.
inline NewsteadRational unnormalize(int g, const NewsteadMonomial& m) {
  if (g < 1) throw DomainError("genus must be >= 1");
  if (m.degree() != 3 * g - 3)
    throw DomainError("monomial of degree " + std::to_string(m.degree()) + " does not pair with genus " +
                      std::to_string(g));
  return NewsteadRational(factorial(g)) * normalized_newstead(m).value;
}

inline NewsteadRational witten_volume(int g) {
  if (g < 2) throw DomainError("witten_volume needs g >= 2");
  return n0(3 * (g - 1), 0).value;
}

// Every monomial of degree 3g-3.
inline std::vector<NewsteadMonomial> newstead_monomials(int g) {
  if (g < 1) throw DomainError("genus must be >= 1");
  const int d = 3 * g - 3;
  std::vector<NewsteadMonomial> out;
  for (int c = 0; 3 * c <= d; ++c)
    for (int b = 0; 3 * c + 2 * b <= d; ++b) out.push_back({d - 3 * c - 2 * b, b, c});
  return out;
}

struct ConjectureReport {
  int max_degree = 0;
  int checked = 0;
  int violations = 0;
  std::vector<std::pair<int, int>> zero_values;       // (m, kappa) with N^0 = 0
  std::vector<std::pair<int, int>> not_representable;  // m < kappa
};

// N^0(alpha^m beta^kappa) != 0  =>  kappa <= (m + 2 kappa) / 3.
inline ConjectureReport conjecture_scan(int max_deg) {
  if (max_deg > 30) throw DomainError("conjecture_scan supports max_deg <= 30");
  ConjectureReport r;
  r.max_degree = max_deg;
  for (int d = 0; d <= max_deg; d += 3)
    for (int kappa = 0; 2 * kappa <= d; ++kappa) {
      const int m = d - 2 * kappa;
      if (m < kappa) {
        r.not_representable.push_back({m, kappa});
        continue;
      }
      ++r.checked;
      auto v = normalized_newstead({m, kappa, 0}).value;
      if (v == 0)
        r.zero_values.push_back({m, kappa});
      else if (3 * kappa > m + 2 * kappa)
        ++r.violations;
    }
  return r;
}

struct RankCrossLink {
  int genus = 0;
  int level = 0;
  double sine_sum = 0;  // ((k+2)/2)^{g-1} sum_j sin(j pi/(k+2))^{2-2g}
  BigInt fusion_rank;
  bool agree = false;
};

inline RankCrossLink rank_crosslink(int g, int k) {
  if (g < 2 || k < 1) throw DomainError("rank_crosslink needs g >= 2, k >= 1");
  RankCrossLink r;
  r.genus = g;
  r.level = k;
  r.sine_sum = verlinde_closed_raw(g, k);
  r.fusion_rank = FusionRing(k).rk(g);
  r.agree = round_checked(r.sine_sum, "sine sum") == r.fusion_rank;
  return r;
}

}  // namespace verlinde
