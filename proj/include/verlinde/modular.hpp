#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "verlinde/error.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/su2.hpp"
#include "verlinde/weights.hpp"

// Level-k modular data.  All labels are twice-spins 0..k.

namespace verlinde {

using RMatrix = Eigen::MatrixXd;

// [n] = sin(n pi/(k+2)) / sin(pi/(k+2))
inline double quantum_integer(int k, int n) {
  const double r = k + 2;
  return std::sin(n * std::numbers::pi / r) / std::sin(std::numbers::pi / r);
}

// conformal weight j(j+1)/(k+2) of twice-spin n
inline double conformal_weight(int k, int n) { return n * (n + 2) / (4.0 * (k + 2)); }

// Racah-Wigner and fusing coefficients, tabulated once per level.
class SixJTable {
 public:
  explicit SixJTable(int k) : k_(k), m_(k + 1) {
    if (k < 1) throw DomainError("level must be positive");
    fact_.assign(2 * k + 4, 1.0);
    for (int n = 1; n < static_cast<int>(fact_.size()); ++n) fact_[n] = fact_[n - 1] * quantum_integer(k, n);
    if (k > kTabulated) return;
    std::size_t total = 1;
    for (int i = 0; i < 6; ++i) total *= m_;
    table_.assign(total, 0.0);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b)
        for (int c = 0; c <= k; ++c)
          for (int d = 0; d <= k; ++d)
            for (int e = 0; e <= k; ++e)
              for (int f = 0; f <= k; ++f) table_[index(a, b, c, d, e, f)] = compute_F(a, b, c, d, e, f);
  }

  int level() const { return k_; }

  // F^{abc}_d with e the (ab) channel and f the (bc) channel; zero if any vertex is inadmissible.
  double F(int a, int b, int c, int d, int e, int f) const {
    if (std::min({a, b, c, d, e, f}) < 0 || std::max({a, b, c, d, e, f}) > k_) return 0.0;
    if (table_.empty()) return compute_F(a, b, c, d, e, f);
    return table_[index(a, b, c, d, e, f)];
  }

  static constexpr int kTabulated = 10;

  // {a b e; c d f}_q, triads (abe) (adf) (cbf) (cde)
  double racah(int a, int b, int e, int c, int d, int f) const {
    if (!(adm(a, b, e) && adm(a, d, f) && adm(c, b, f) && adm(c, d, e))) return 0.0;
    const int lo = std::max({a + b + e, a + d + f, c + b + f, c + d + e}) / 2;
    const int hi = std::min({a + b + c + d, a + c + e + f, b + d + e + f}) / 2;
    double s = 0;
    for (int z = lo; z <= hi; ++z) {
      double den = qf(z - (a + b + e) / 2) * qf(z - (a + d + f) / 2) * qf(z - (c + b + f) / 2) *
                   qf(z - (c + d + e) / 2) * qf((a + b + c + d) / 2 - z) * qf((a + c + e + f) / 2 - z) *
                   qf((b + d + e + f) / 2 - z);
      if (den == 0) throw InvariantViolation("vanishing quantum factorial in a 6j denominator");
      s += (z % 2 ? -1.0 : 1.0) * qf(z + 1) / den;
    }
    return tri(a, b, e) * tri(a, d, f) * tri(c, b, f) * tri(c, d, e) * s;
  }

  bool adm(int a, int b, int c) const { return vertex_admissible(k_, a, b, c); }

 private:
  std::size_t index(int a, int b, int c, int d, int e, int f) const {
    return ((((static_cast<std::size_t>(a) * m_ + b) * m_ + c) * m_ + d) * m_ + e) * m_ + f;
  }
  // [n]!, zero from n = k+2 on
  double qf(int n) const { return n < static_cast<int>(fact_.size()) ? fact_[n] : 0.0; }
  double tri(int a, int b, int c) const {
    return std::sqrt(qf((a + b - c) / 2) * qf((a - b + c) / 2) * qf((b + c - a) / 2) / qf((a + b + c) / 2 + 1));
  }
  double compute_F(int a, int b, int c, int d, int e, int f) const {
    if (!(adm(a, b, e) && adm(e, c, d) && adm(b, c, f) && adm(a, f, d))) return 0.0;
    const double sign = ((a + b + c + d) / 2) % 2 ? -1.0 : 1.0;
    return sign * std::sqrt(quantum_integer(k_, e + 1) * quantum_integer(k_, f + 1)) * racah(a, b, e, c, d, f);
  }

  int k_;
  int m_;
  std::vector<double> fact_;
  std::vector<double> table_;
};

inline const SixJTable& sixj_table(int k) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SixJTable>> cache;
  if (k < 1) throw DomainError("level must be positive");
  if (k > 40) throw ResourceLimit("6j tables are built for k <= 40");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[k];
  if (!slot) slot = std::make_unique<SixJTable>(k);
  return *slot;
}

// F_ij(j2 j3; j1 j4): i is the (j1 j2) channel, j the (j2 j3) channel.
inline Complex q6j(int k, int j1, int j2, int j3, int j4, int i, int j) {
  return sixj_table(k).F(j1, j2, j3, j4, i, j);
}

inline RMatrix fusing_matrix(int k, int j1, int j2, int j3, int j4) {
  const auto& t = sixj_table(k);
  RMatrix M = RMatrix::Zero(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) M(i, j) = t.F(j1, j2, j3, j4, i, j);
  return M;
}

// Half-monodromy eigenvalue of j2, j3 fused into channel i; eps = -1 gives the inverse braid.
inline Complex braid_eigenvalue(int k, int j2, int j3, int i, int eps = 1) {
  const double sign = ((j2 + j3 - i) / 2) % 2 ? -1.0 : 1.0;
  const double ph = eps * std::numbers::pi *
                    (conformal_weight(k, i) - conformal_weight(k, j2) - conformal_weight(k, j3));
  return sign * std::exp(Complex(0, ph));
}

// Braid of j2 past j3: rows in (j1 j2) channels of (j1 j2 j3 | j4), columns in
// (j1 j3) channels of (j1 j3 j2 | j4).
inline CMatrix braiding(int k, int j1, int j2, int j3, int j4, int eps = 1) {
  const auto& t = sixj_table(k);
  CMatrix B = CMatrix::Zero(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      Complex s = 0;
      for (int m = 0; m <= k; ++m) {
        const double a = t.F(j1, j2, j3, j4, i, m);
        if (a == 0) continue;
        s += a * braid_eigenvalue(k, j2, j3, m, eps) * t.F(j1, j3, j2, j4, j, m);
      }
      B(i, j) = s;
    }
  return B;
}

// ---------------------------------------------------------------------------
// relation residuals

inline double orthogonality_residual(int k) {
  const auto& t = sixj_table(k);
  double worst = 0;
  for (int j1 = 0; j1 <= k; ++j1)
    for (int j2 = 0; j2 <= k; ++j2)
      for (int j3 = 0; j3 <= k; ++j3)
        for (int j4 = 0; j4 <= k; ++j4)
          for (int i = 0; i <= k; ++i) {
            if (!(t.adm(j1, j2, i) && t.adm(i, j3, j4))) continue;
            for (int l = 0; l <= k; ++l) {
              double s = 0;
              for (int j = 0; j <= k; ++j) s += t.F(j1, j2, j3, j4, i, j) * t.F(j2, j3, j4, j1, j, l);
              worst = std::max(worst, std::abs(s - (l == i ? 1.0 : 0.0)));
            }
          }
  return worst;
}

inline double symmetry_residual(int k) {
  const auto& t = sixj_table(k);
  double worst = 0;
  for (int j1 = 0; j1 <= k; ++j1)
    for (int j2 = 0; j2 <= k; ++j2)
      for (int j3 = 0; j3 <= k; ++j3)
        for (int j4 = 0; j4 <= k; ++j4)
          for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j)
              worst = std::max(worst, std::abs(t.F(j1, j2, j3, j4, i, j) - t.F(j3, j4, j1, j2, i, j)));
  return worst;
}

// F^{fcd}_{e;gl} F^{abl}_{e;fk} = sum_h F^{abc}_{g;fh} F^{ahd}_{e;gk} F^{bcd}_{k;hl}
inline double pentagon_check(int k, int threads = 1) {
  const auto& t = sixj_table(k);
  std::vector<double> worst(k + 1, 0.0);
  auto work = [&](int a) {
    double w = 0;
    for (int b = 0; b <= k; ++b)
      for (int f = 0; f <= k; ++f) {
        if (!t.adm(a, b, f)) continue;
        for (int c = 0; c <= k; ++c)
          for (int g = 0; g <= k; ++g) {
            if (!t.adm(f, c, g)) continue;
            for (int d = 0; d <= k; ++d)
              for (int e = 0; e <= k; ++e) {
                if (!t.adm(g, d, e)) continue;
                for (int kk = 0; kk <= k; ++kk)
                  for (int l = 0; l <= k; ++l) {
                    const double lhs = t.F(f, c, d, e, g, l) * t.F(a, b, l, e, f, kk);
                    double rhs = 0;
                    for (int h = 0; h <= k; ++h)
                      rhs += t.F(a, b, c, g, f, h) * t.F(a, h, d, e, g, kk) * t.F(b, c, d, kk, h, l);
                    w = std::max(w, std::abs(lhs - rhs));
                  }
              }
          }
      }
    worst[a] = w;
  };
  threads = std::max(1, std::min(threads, k + 1));
  std::vector<std::thread> pool;
  for (int r = 0; r < threads; ++r)
    pool.emplace_back([&, r] {
      for (int a = r; a <= k; a += threads) work(a);
    });
  for (auto& th : pool) th.join();
  return *std::max_element(worst.begin(), worst.end());
}

// Entrywise: B_ij(j2 j3; j1 j4) = (-1)^{j1+j4-i-j} e^{-pi i (h_i + h_j - h_1 - h_4)} F_ij(j1 j3; j2 j4)
inline double braid_phase_relation_residual(int k) {
  const auto& t = sixj_table(k);
  double worst = 0;
  for (int j1 = 0; j1 <= k; ++j1)
    for (int j2 = 0; j2 <= k; ++j2)
      for (int j3 = 0; j3 <= k; ++j3)
        for (int j4 = 0; j4 <= k; ++j4) {
          CMatrix B = braiding(k, j1, j2, j3, j4);
          for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) {
              const double sign = ((j1 + j4 - i - j) / 2) % 2 ? -1.0 : 1.0;
              const double ph = -std::numbers::pi * (conformal_weight(k, i) + conformal_weight(k, j) -
                                                     conformal_weight(k, j1) - conformal_weight(k, j4));
              Complex rhs = sign * std::exp(Complex(0, ph)) * t.F(j2, j1, j3, j4, i, j);
              worst = std::max(worst, std::abs(B(i, j) - rhs));
            }
        }
  return worst;
}

// B(+) composed with B(-) of the swapped pair is the identity on admissible channels.
inline double braid_inverse_residual(int k) {
  const auto& t = sixj_table(k);
  double worst = 0;
  for (int j1 = 0; j1 <= k; ++j1)
    for (int j2 = 0; j2 <= k; ++j2)
      for (int j3 = 0; j3 <= k; ++j3)
        for (int j4 = 0; j4 <= k; ++j4) {
          CMatrix P = braiding(k, j1, j2, j3, j4, 1) * braiding(k, j1, j3, j2, j4, -1);
          for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) {
              const double id = (i == j && t.adm(j1, j2, i) && t.adm(i, j3, j4)) ? 1.0 : 0.0;
              worst = std::max(worst, std::abs(P(i, j) - id));
            }
        }
  return worst;
}

// Braid generators on four strands of equal label a, fusing to c, in the
// left-comb basis ((a a)_x a)_y a -> c.
struct BraidRepresentation {
  std::vector<std::pair<int, int>> basis;  // (x, y)
  std::array<CMatrix, 3> sigma;
};

inline BraidRepresentation four_strand_braids(int k, int a, int c) {
  const auto& t = sixj_table(k);
  BraidRepresentation r;
  for (int x = 0; x <= k; ++x)
    for (int y = 0; y <= k; ++y)
      if (t.adm(a, a, x) && t.adm(x, a, y) && t.adm(y, a, c)) r.basis.push_back({x, y});
  const int n = static_cast<int>(r.basis.size());
  for (auto& s : r.sigma) s = CMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      auto [x, y] = r.basis[p];
      auto [x2, y2] = r.basis[q];
      if (p == q) r.sigma[0](p, q) = braid_eigenvalue(k, a, a, x);
      if (y == y2)
        for (int s = 0; s <= k; ++s)
          r.sigma[1](p, q) += t.F(a, a, a, y, x, s) * braid_eigenvalue(k, a, a, s) * t.F(a, a, a, y, x2, s);
      if (x == x2)
        for (int s = 0; s <= k; ++s)
          r.sigma[2](p, q) += t.F(x, a, a, c, y, s) * braid_eigenvalue(k, a, a, s) * t.F(x, a, a, c, y2, s);
    }
  return r;
}

inline double yang_baxter_residual(int k) {
  double worst = 0;
  for (int a = 0; a <= k; ++a)
    for (int c = 0; c <= k; ++c) {
      auto r = four_strand_braids(k, a, c);
      if (r.basis.empty()) continue;
      const auto& s = r.sigma;
      worst = std::max(worst, (s[0] * s[1] * s[0] - s[1] * s[0] * s[1]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (s[1] * s[2] * s[1] - s[2] * s[1] * s[2]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (s[0] * s[2] - s[2] * s[0]).cwiseAbs().maxCoeff());
    }
  return worst;
}

// ---------------------------------------------------------------------------
// torus data

inline RMatrix s_torus(int k) {
  if (k < 1) throw DomainError("level must be positive");
  RMatrix S(k + 1, k + 1);
  const double r = k + 2;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) S(a, b) = std::sqrt(2 / r) * std::sin((a + 1) * (b + 1) * std::numbers::pi / r);
  return S;
}

// e^{2 pi i (h_n - k/(8(k+2)))}
inline Complex t_phase(int k, int n) {
  return std::exp(Complex(0, 2 * std::numbers::pi * (conformal_weight(k, n) - k / (8.0 * (k + 2)))));
}

inline CMatrix t_torus(int k) {
  CMatrix T = CMatrix::Zero(k + 1, k + 1);
  for (int a = 0; a <= k; ++a) T(a, a) = t_phase(k, a);
  return T;
}

// Phases are compared modulo powers of zeta = e^{pi i k/(4(k+2))}.
struct PhaseClass {
  double modulus = 0;
  double reduced_arg = 0;  // arg in [0, unit)
  double unit = 0;         // 2 pi / order(zeta)
};

inline double phase_unit(int k) {
  const long long g = std::gcd<long long>(k, 8LL * (k + 2));
  return 2 * std::numbers::pi * double(g) / (8.0 * (k + 2));
}

inline PhaseClass phase_class(int k, Complex z) {
  PhaseClass c;
  c.modulus = std::abs(z);
  c.unit = phase_unit(k);
  double a = std::arg(z);
  a = std::fmod(a, c.unit);
  if (a < 0) a += c.unit;
  if (c.unit - a < 1e-12) a = 0;
  c.reduced_arg = c.modulus < 1e-300 ? 0 : a;
  return c;
}

inline bool same_phase_class(int k, Complex a, Complex b, double tol = 1e-9) {
  if (std::abs(std::abs(a) - std::abs(b)) > tol * std::max(1.0, std::abs(a))) return false;
  if (std::abs(a) < tol) return true;
  const double u = phase_unit(k);
  double d = std::fmod(std::arg(a / b), u);
  if (d < 0) d += u;
  return std::min(d, u - d) < tol;
}

struct TorusCheck {
  double s_symmetric = 0;
  double s_squared = 0;      // |S^2 - 1|
  double s_unitary = 0;
  double st_cubed = 0;       // |(ST)^3 - c S^2| with the best phase c
  Complex st_phase = 0;      // that c
  bool st_phase_in_class = false;
  double t_unimodular = 0;
};

inline TorusCheck check_torus(int k) {
  TorusCheck c;
  RMatrix S = s_torus(k);
  const int n = k + 1;
  c.s_symmetric = (S - S.transpose()).cwiseAbs().maxCoeff();
  c.s_squared = (S * S - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  c.s_unitary = (S * S.transpose() - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  CMatrix T = t_torus(k);
  for (int a = 0; a < n; ++a) c.t_unimodular = std::max(c.t_unimodular, std::abs(std::abs(T(a, a)) - 1));
  CMatrix Sc = S.cast<Complex>();
  CMatrix P = Sc * T;
  CMatrix P3 = P * P * P, S2 = Sc * Sc;
  c.st_phase = P3.trace() / S2.trace();
  c.st_cubed = (P3 - c.st_phase * S2).cwiseAbs().maxCoeff();
  c.st_phase_in_class = same_phase_class(k, c.st_phase, 1.0);
  return c;
}

// ---------------------------------------------------------------------------
// genus-1 Heegaard invariants

struct HeegaardWord {
  // generators read left to right; 'S' or 'T' with exponent
  std::vector<std::pair<char, int>> letters;
};

inline HeegaardWord parse_heegaard_word(const std::string& text) {
  HeegaardWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const char g = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    if (g != 'S' && g != 'T') throw UsageError("unknown generator '" + tok + "'");
    int p = 1;
    if (tok.size() > 1) {
      if (tok[1] != '^') throw UsageError("bad generator '" + tok + "'");
      try {
        std::size_t used = 0;
        p = std::stoi(tok.substr(2), &used);
        if (used != tok.size() - 2) throw UsageError("bad exponent");
      } catch (const std::logic_error&) {
        throw UsageError("bad exponent in '" + tok + "'");
      }
    }
    w.letters.push_back({g, p});
  }
  return w;
}

inline CMatrix heegaard_matrix(const HeegaardWord& w, int k) {
  CMatrix S = s_torus(k).cast<Complex>(), Sinv = S.inverse();
  CMatrix rho = CMatrix::Identity(k + 1, k + 1);
  for (auto [g, p] : w.letters) {
    if (g == 'S') {
      for (int i = 0; i < std::abs(p); ++i) rho = rho * (p > 0 ? S : Sinv);
    } else {
      CMatrix T = CMatrix::Zero(k + 1, k + 1);
      for (int a = 0; a <= k; ++a) T(a, a) = std::pow(t_phase(k, a), p);
      rho = rho * T;
    }
  }
  return rho;
}

struct HeegaardInvariant {
  Complex value;
  PhaseClass phase;
};

// <w0, rho(word) w0> with w0 the label-0 vector
inline HeegaardInvariant heegaard_invariant(const HeegaardWord& w, int k) {
  if (k < 1) throw DomainError("level must be positive");
  HeegaardInvariant r;
  r.value = heegaard_matrix(w, k)(0, 0);
  r.phase = phase_class(k, r.value);
  return r;
}

// ---------------------------------------------------------------------------
// block spaces

struct BlockSpace {
  std::shared_ptr<const Graph> graph;
  int level = 1;
  std::vector<int> boundary;  // labels on parabolic edges, or empty for closed graphs
  std::vector<std::vector<int>> basis;
  std::map<std::vector<int>, int> index;

  int dim() const { return static_cast<int>(basis.size()); }
};

inline BlockSpace make_block_space(std::shared_ptr<const Graph> g, int k, std::vector<int> boundary = {}) {
  if (k < 1) throw DomainError("level must be positive");
  BlockSpace s;
  s.graph = std::move(g);
  s.level = k;
  if (!s.graph->is_closed() && static_cast<int>(boundary.size()) != s.graph->num_edges())
    throw PreconditionError("graphs with legs need a label for every edge, -1 meaning free");
  s.boundary = std::move(boundary);
  s.basis = enumerate_labels(*s.graph, k, s.boundary.empty() ? nullptr : &s.boundary);
  for (int i = 0; i < s.dim(); ++i) s.index[s.basis[i]] = i;
  return s;
}

// Diagonal phases of T_e in the weight basis.
inline std::vector<Complex> t_operator(const BlockSpace& s, int e) {
  if (e < 0 || e >= s.graph->num_edges()) throw InvalidMove("edge index out of range");
  std::vector<Complex> d;
  for (const auto& w : s.basis) d.push_back(t_phase(s.level, w[e]));
  return d;
}

struct BasisTransport {
  BlockSpace target;
  CMatrix matrix;  // column i: image of source basis vector i
};

// Fusing matrix on the 4-point neighbourhood of e, identity elsewhere.
inline BasisTransport fusion_basis_transport(const BlockSpace& src, int e, int which) {
  if (which != 0 && which != 1) throw InvalidMove("which must be 0 or 1");
  const Graph& g = *src.graph;
  auto et = elementary_transformations(g, e);
  if (et.loop_edge) throw InvalidMove("loop edges have no fusion transport");
  BasisTransport r;
  r.target = make_block_space(std::make_shared<const Graph>(et.graphs[which]), src.level, src.boundary);
  const auto& t = sixj_table(src.level);
  // old pairing {x0, x1} | {y0, y1}; new {x0, y_which} | {x1, y_other}
  const Dart x0 = et.x[0], x1 = et.x[1], yk = et.y[which], yo = et.y[1 - which];
  r.matrix = CMatrix::Zero(r.target.dim(), src.dim());
  for (int i = 0; i < src.dim(); ++i) {
    const auto& w = src.basis[i];
    const int a = w[edge_of(x1)], b = w[edge_of(x0)], c = w[edge_of(yk)], d = w[edge_of(yo)];
    for (int f = 0; f <= src.level; ++f) {
      const double v = t.F(a, b, c, d, w[e], f);
      if (v == 0) continue;
      auto w2 = w;
      w2[e] = f;
      auto it = r.target.index.find(w2);
      if (it == r.target.index.end()) throw InvariantViolation("fusion transport left the target basis");
      r.matrix(it->second, i) += v;
    }
  }
  return r;
}

// Version taking both spaces; the target must be one of the two moves of e.
inline CMatrix fusion_basis_transport(const BlockSpace& src, const BlockSpace& dst, int e) {
  if (src.level != dst.level) throw InvalidMove("block spaces have different levels");
  auto et = elementary_transformations(*src.graph, e);
  for (int which = 0; which < 2; ++which)
    if (!et.loop_edge && et.graphs[which].edge_ends() == dst.graph->edge_ends()) {
      auto r = fusion_basis_transport(src, e, which);
      if (r.target.basis != dst.basis) throw InvariantViolation("target basis mismatch");
      return r.matrix;
    }
  throw InvalidMove("graphs are not related by an elementary transformation at this edge");
}

// ---------------------------------------------------------------------------
// one-holed torus switching operators

// labels a with (a, a, j) admissible: the basis of the one-holed torus space
inline std::vector<int> one_holed_torus_basis(int k, int j) {
  std::vector<int> out;
  for (int a = 0; a <= k; ++a)
    if (vertex_admissible(k, a, a, j)) out.push_back(a);
  return out;
}

enum class SwitchingPhase { Literal, Conjugate };

// The eigenvalue required of S_k(j)^2: (-1)^j e^{+-pi i h_j}, j the spin.
inline Complex switching_square(int k, int j, SwitchingPhase ph) {
  const double sign = (j / 2) % 2 ? -1.0 : 1.0;
  const double s = ph == SwitchingPhase::Literal ? 1.0 : -1.0;
  return sign * std::exp(Complex(0, s * std::numbers::pi * conformal_weight(k, j)));
}

struct SwitchingSolution {
  int level = 1;
  int j = 0;
  std::vector<int> basis;
  CMatrix S;
  double residual = 0;  // max of the square and cube conditions
  bool found = false;
};

inline double switching_residual(const CMatrix& S, const CMatrix& T, Complex lam) {
  const int d = static_cast<int>(S.rows());
  CMatrix S2 = S * S, P = S * T;
  double r = (S2 - lam * CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return std::max(r, (P * P * P - S2).cwiseAbs().maxCoeff());
}

// Numerical search for S with S^2 = lambda and (S T_a)^3 = S^2 on the one-holed
// torus space; damped Gauss-Newton from random starts.  j = 0 returns the torus S.
inline SwitchingSolution solve_switching_operator(int k, int j, SwitchingPhase ph = SwitchingPhase::Conjugate,
                                                  int restarts = 200, unsigned seed = 0) {
  if (j < 0 || j > k || j % 2) throw DomainError("the hole label must be an even twice-spin <= k");
  SwitchingSolution sol;
  sol.level = k;
  sol.j = j;
  sol.basis = one_holed_torus_basis(k, j);
  const int d = static_cast<int>(sol.basis.size());
  CMatrix T = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) T(i, i) = t_phase(k, sol.basis[i]);
  const Complex lam = switching_square(k, j, ph);
  if (j == 0 && ph == SwitchingPhase::Conjugate) {
    sol.S = s_torus(k).cast<Complex>();
    sol.residual = switching_residual(sol.S, T, lam);
    sol.found = sol.residual < 1e-10;
    return sol;
  }
  const int np = 2 * d * d;
  auto unpack = [&](const Eigen::VectorXd& p) {
    CMatrix S(d, d);
    for (int i = 0; i < d * d; ++i) S(i / d, i % d) = Complex(p(i), p(d * d + i));
    return S;
  };
  auto res = [&](const Eigen::VectorXd& p) {
    CMatrix S = unpack(p), S2 = S * S, P = S * T;
    CMatrix r1 = S2 - lam * CMatrix::Identity(d, d), r2 = P * P * P - S2;
    Eigen::VectorXd r(4 * d * d);
    for (int i = 0; i < d * d; ++i) {
      r(i) = r1(i / d, i % d).real();
      r(d * d + i) = r1(i / d, i % d).imag();
      r(2 * d * d + i) = r2(i / d, i % d).real();
      r(3 * d * d + i) = r2(i / d, i % d).imag();
    }
    return r;
  };
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0, 1);
  double best = 1e300;
  for (int trial = 0; trial < restarts && best > 1e-13; ++trial) {
    Eigen::VectorXd p(np);
    for (int i = 0; i < np; ++i) p(i) = N(rng);
    double mu = 1e-3;
    Eigen::VectorXd r = res(p);
    for (int it = 0; it < 200; ++it) {
      Eigen::MatrixXd J(r.size(), np);
      for (int c = 0; c < np; ++c) {
        Eigen::VectorXd q = p;
        q(c) += 1e-7;
        J.col(c) = (res(q) - r) / 1e-7;
      }
      Eigen::MatrixXd A = J.transpose() * J;
      A.diagonal().array() += mu;
      Eigen::VectorXd step = A.ldlt().solve(-J.transpose() * r);
      Eigen::VectorXd r2 = res(p + step);
      if (r2.squaredNorm() < r.squaredNorm()) {
        p += step;
        r = r2;
        mu = std::max(mu / 3, 1e-15);
      } else {
        mu *= 4;
      }
      if (r.cwiseAbs().maxCoeff() < 1e-14 || mu > 1e10) break;
    }
    const double rr = switching_residual(unpack(p), T, lam);
    if (rr < best) {
      best = rr;
      sol.S = unpack(p);
    }
  }
  sol.residual = best;
  sol.found = best < 1e-10;
  return sol;
}

// ---------------------------------------------------------------------------
// summary used by the CLI and the acceptance suite

struct ModularCheck {
  int level = 1;
  double orthogonality = 0;
  double symmetry = 0;
  double pentagon = 0;
  double yang_baxter = 0;
  double braid_inverse = 0;
  double braid_phase_relation = 0;
  TorusCheck torus;
};

inline ModularCheck check_modular(int k, int threads = 1) {
  ModularCheck c;
  c.level = k;
  c.orthogonality = orthogonality_residual(k);
  c.symmetry = symmetry_residual(k);
  c.pentagon = pentagon_check(k, threads);
  c.yang_baxter = yang_baxter_residual(k);
  c.braid_inverse = braid_inverse_residual(k);
  c.braid_phase_relation = braid_phase_relation_residual(k);
  c.torus = check_torus(k);
  return c;
}

}  // namespace verlinde
