#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "verlinde/error.hpp"

namespace verlinde {

// a . x <= b with integer a.
struct LinearConstraint {
  std::vector<int> a;
  boost::multiprecision::cpp_rational b;

  bool operator<(const LinearConstraint& o) const { return a != o.a ? a < o.a : b < o.b; }
  bool operator==(const LinearConstraint& o) const { return a == o.a && b == o.b; }
};

struct MomentPolytope {
  using Rational = boost::multiprecision::cpp_rational;

  int dim = 0;
  std::vector<LinearConstraint> constraints;
  std::vector<std::array<int, 3>> vertex_edges;  // for the parity sublattice

  void add(const LinearConstraint& c) {
    if (std::all_of(c.a.begin(), c.a.end(), [](int x) { return x == 0; })) return;
    if (std::find(constraints.begin(), constraints.end(), c) == constraints.end()) constraints.push_back(c);
  }

  bool contains(const std::vector<Rational>& x) const {
    for (const auto& c : constraints) {
      Rational s = 0;
      for (int i = 0; i < dim; ++i) s += c.a[i] * x[i];
      if (s > c.b) return false;
    }
    return true;
  }

  // Tests x / denom.
  bool contains_scaled(const std::vector<int>& x, long long denom) const {
    for (const auto& c : constraints) {
      long long s = 0;
      for (int i = 0; i < dim; ++i) s += static_cast<long long>(c.a[i]) * x[i];
      if (Rational(s) > c.b * denom) return false;
    }
    return true;
  }
};

struct VolumeResult {
  using Rational = boost::multiprecision::cpp_rational;
  bool exact = false;
  Rational value;          // exact volume when exact
  double estimate = 0;
  double half_width = 0;   // Hoeffding bound, Monte Carlo only
  double confidence = 1;
  long long samples = 0;
  int vertices = 0;
  int simplices = 0;
};

struct VolumeOptions {
  int exact_max_dim = 6;
  long long samples = 2'000'000;
  double confidence = 0.99;
  unsigned long long seed = 0;
  double box = 0.5;  // Monte Carlo samples the cube [0, box]^dim
};

namespace detail {

using Rat = boost::multiprecision::cpp_rational;
using BigI = boost::multiprecision::cpp_int;

inline bool solve_double(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x) {
  const int n = static_cast<int>(m.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-9) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (int r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
      rhs[r] -= f * rhs[c];
    }
  }
  x.assign(n, 0);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int j = r + 1; j < n; ++j) s -= m[r][j] * x[j];
    x[r] = s / m[r][r];
  }
  return true;
}

inline std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs) {
  const int n = static_cast<int>(m.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) throw InvariantViolation("singular vertex system in exact re-solve");
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Rat> x(n);
  for (int r = 0; r < n; ++r) x[r] = rhs[r] / m[r][r];
  return x;
}

// Fraction-free elimination on integer rows; returns rank, and the
// determinant when square.
inline int bareiss(std::vector<std::vector<BigI>> m, BigI* det = nullptr) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  BigI prev = 1;
  int rank = 0;
  int sign = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) {
      if (det) *det = 0;
      continue;
    }
    if (piv != rank) {
      std::swap(m[piv], m[rank]);
      sign = -sign;
    }
    for (int r = rank + 1; r < rows; ++r) {
      for (int j = c + 1; j < cols; ++j) m[r][j] = (m[r][j] * m[rank][c] - m[r][c] * m[rank][j]) / prev;
      m[r][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  if (det) *det = rank == rows && rows == cols ? BigI(sign * prev) : BigI(0);
  return rank;
}

}  // namespace detail

// Exact volume: vertex enumeration over n-subsets of constraints, then a
// pulling triangulation with exact integer determinants.  Monte Carlo with a
// Hoeffding bound above exact_max_dim.
inline VolumeResult polytope_volume(const MomentPolytope& P, const VolumeOptions& opt = {}) {
  using detail::BigI;
  using detail::Rat;
  const int n = P.dim;
  const int m = static_cast<int>(P.constraints.size());
  VolumeResult res;
  if (n > opt.exact_max_dim) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.0, opt.box);
    std::vector<std::vector<double>> A(m, std::vector<double>(n));
    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A[i][j] = P.constraints[i].a[j];
      b[i] = static_cast<double>(P.constraints[i].b);
    }
    long long hits = 0;
    std::vector<double> x(n);
    for (long long s = 0; s < opt.samples; ++s) {
      for (auto& xi : x) xi = U(rng);
      bool in = true;
      for (int i = 0; i < m && in; ++i) {
        double t = 0;
        for (int j = 0; j < n; ++j) t += A[i][j] * x[j];
        in = t <= b[i];
      }
      hits += in;
    }
    const double cube = std::pow(opt.box, n);
    res.samples = opt.samples;
    res.estimate = cube * static_cast<double>(hits) / static_cast<double>(opt.samples);
    res.confidence = opt.confidence;
    res.half_width = cube * std::sqrt(std::log(2.0 / (1.0 - opt.confidence)) / (2.0 * static_cast<double>(opt.samples)));
    return res;
  }

  // vertices
  std::set<std::vector<Rat>> verts;
  std::set<std::vector<long long>> seen;
  std::vector<int> pick(n);
  std::vector<char> sel(m, 0);
  std::fill(sel.begin(), sel.begin() + std::min(n, m), 1);
  std::vector<double> bd(m);
  for (int i = 0; i < m; ++i) bd[i] = static_cast<double>(P.constraints[i].b);
  do {
    std::vector<std::vector<double>> M;
    std::vector<double> rhs;
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (sel[i]) {
        idx.push_back(i);
        M.emplace_back(P.constraints[i].a.begin(), P.constraints[i].a.end());
        rhs.push_back(bd[i]);
      }
    std::vector<double> x;
    if (!detail::solve_double(M, rhs, x)) continue;
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i) {
      double t = 0;
      for (int j = 0; j < n; ++j) t += P.constraints[i].a[j] * x[j];
      feasible = t <= bd[i] + 1e-9;
    }
    if (!feasible) continue;
    std::vector<long long> key(n);
    for (int j = 0; j < n; ++j) key[j] = std::llround(x[j] * 1e8);
    if (!seen.insert(key).second) continue;
    std::vector<std::vector<Rat>> MR;
    std::vector<Rat> rr;
    for (int i : idx) {
      MR.emplace_back(P.constraints[i].a.begin(), P.constraints[i].a.end());
      rr.push_back(P.constraints[i].b);
    }
    auto xe = detail::solve_exact(MR, rr);
    if (P.contains(xe)) verts.insert(xe);
  } while (std::prev_permutation(sel.begin(), sel.end()));

  std::vector<std::vector<Rat>> V(verts.begin(), verts.end());
  res.vertices = static_cast<int>(V.size());
  res.exact = true;
  if (static_cast<int>(V.size()) <= n) {
    res.value = 0;
    return res;
  }
  // common denominator
  BigI L = 1;
  for (const auto& v : V)
    for (const auto& c : v) L = boost::multiprecision::lcm(L, denominator(c));
  std::vector<std::vector<BigI>> X;
  for (const auto& v : V) {
    std::vector<BigI> row;
    for (const auto& c : v) row.push_back(numerator(Rat(c * L)));
    X.push_back(row);
  }
  // tight sets
  std::vector<std::vector<char>> tight(V.size(), std::vector<char>(m, 0));
  for (std::size_t v = 0; v < V.size(); ++v)
    for (int i = 0; i < m; ++i) {
      Rat s = 0;
      for (int j = 0; j < n; ++j) s += P.constraints[i].a[j] * V[v][j];
      tight[v][i] = s == P.constraints[i].b;
    }
  auto affine_dim = [&](const std::vector<int>& F) {
    if (F.size() <= 1) return 0;
    std::vector<std::vector<BigI>> D;
    for (std::size_t i = 1; i < F.size(); ++i) {
      std::vector<BigI> row(n);
      for (int j = 0; j < n; ++j) row[j] = X[F[i]][j] - X[F[0]][j];
      D.push_back(row);
    }
    return detail::bareiss(D);
  };
  std::map<std::vector<int>, std::vector<std::vector<int>>> memo;
  auto triangulate = [&](auto&& self, const std::vector<int>& F, int d) -> std::vector<std::vector<int>> {
    if (d == 0) return {{F[0]}};
    auto it = memo.find(F);
    if (it != memo.end()) return it->second;
    std::set<std::vector<int>> facets;
    for (int i = 0; i < m; ++i) {
      std::vector<int> G;
      for (int v : F)
        if (tight[v][i]) G.push_back(v);
      if (G.size() == F.size() || static_cast<int>(G.size()) < d) continue;
      if (affine_dim(G) == d - 1) facets.insert(G);
    }
    std::vector<std::vector<int>> out;
    const int apex = F[0];
    for (const auto& G : facets) {
      if (std::binary_search(G.begin(), G.end(), apex)) continue;
      for (auto s : self(self, G, d - 1)) {
        s.push_back(apex);
        out.push_back(std::move(s));
      }
    }
    memo[F] = out;
    return out;
  };
  std::vector<int> all(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) all[i] = static_cast<int>(i);
  const int full = affine_dim(all);
  if (full < n) {
    res.value = 0;
    return res;
  }
  auto simplices = triangulate(triangulate, all, n);
  res.simplices = static_cast<int>(simplices.size());
  BigI total = 0;
  for (const auto& s : simplices) {
    std::vector<std::vector<BigI>> D;
    for (int i = 1; i <= n; ++i) {
      std::vector<BigI> row(n);
      for (int j = 0; j < n; ++j) row[j] = X[s[i]][j] - X[s[0]][j];
      D.push_back(row);
    }
    BigI det;
    detail::bareiss(D, &det);
    total += abs(det);
  }
  BigI denom = 1;
  for (int i = 2; i <= n; ++i) denom *= i;
  for (int i = 0; i < n; ++i) denom *= L;
  res.value = Rat(total) / Rat(denom);
  res.estimate = static_cast<double>(res.value);
  return res;
}

}  // namespace verlinde
