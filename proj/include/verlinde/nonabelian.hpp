#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "verlinde/gauge.hpp"
#include "verlinde/su2.hpp"
#include "verlinde/theta.hpp"
#include "verlinde/weights.hpp"

namespace verlinde {

using SchottkyPoint = std::vector<Mat2>;

struct Slot {
  int factor = 0;  // which SU(2) factor alpha
  int spin = 0;    // twice-spin
  bool operator==(const Slot&) const = default;
};

// Term tr(R(x) B), R(x) = tensor over slots of rho_spin(x_factor).
struct PWBlock {
  std::vector<Slot> slots;
  CMatrix B;

  int dim() const {
    int d = 1;
    for (const auto& s : slots) d *= s.spin + 1;
    return d;
  }
};

struct PWSeries {
  int genus = 1;
  std::vector<PWBlock> blocks;
};

constexpr int kMaxBlockDim = 1500;
constexpr int kMaxFullExpDim = 600;

namespace detail {

inline std::vector<int> slot_dims(const std::vector<Slot>& slots) {
  std::vector<int> d;
  for (const auto& s : slots) d.push_back(s.spin + 1);
  return d;
}

// K acts on the row multi-index restricted to the slots in `which`.
inline CMatrix apply_on_slots(const CMatrix& K, const std::vector<int>& which, const std::vector<int>& dims,
                              const CMatrix& B) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  const int D = static_cast<int>(B.rows());
  int dS = 1;
  for (int w : which) dS *= dims[w];
  std::vector<int> sub_offset(dS, 0);
  for (int s = 0; s < dS; ++s) {
    int rem = s, off = 0;
    for (int q = static_cast<int>(which.size()) - 1; q >= 0; --q) {
      const int w = which[q];
      off += (rem % dims[w]) * stride[w];
      rem /= dims[w];
    }
    sub_offset[s] = off;
  }
  std::vector<char> in_which(n, 0);
  for (int w : which) in_which[w] = 1;
  CMatrix out = CMatrix::Zero(D, B.cols());
  CMatrix gather(dS, B.cols());
  for (int r = 0; r < D; ++r) {
    bool base = true;
    for (int i = 0; i < n && base; ++i)
      if (in_which[i] && (r / stride[i]) % dims[i] != 0) base = false;
    if (!base) continue;
    for (int s = 0; s < dS; ++s) gather.row(s) = B.row(r + sub_offset[s]);
    CMatrix res = K * gather;
    for (int s = 0; s < dS; ++s) out.row(r + sub_offset[s]) = res.row(s);
  }
  return out;
}

inline CMatrix embed_slot_operator(const CMatrix& J, int slot, const std::vector<int>& dims) {
  CMatrix acc = CMatrix::Identity(1, 1);
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    CMatrix f = i == slot ? J : CMatrix::Identity(dims[i], dims[i]);
    acc = Eigen::kroneckerProduct(acc, f).eval();
  }
  return acc;
}

inline bool is_diagonal(const PeriodMatrix& W) {
  for (int i = 0; i < W.rows(); ++i)
    for (int j = 0; j < W.cols(); ++j)
      if (i != j && std::abs(W(i, j)) > 0) return false;
  return true;
}

}  // namespace detail

// Left-multiplication operator L with Delta^{(-i W)} tr(R(x) B) = tr(R(x) L B):
// L = (i / 2 pi) sum_{ab} W_ab sum_mu J^(a)_mu J^(b)_mu, J^(a) summed over the slots of factor a.
inline CMatrix laplacian_block(const std::vector<Slot>& slots, const PeriodMatrix& W) {
  const auto dims = detail::slot_dims(slots);
  int D = 1;
  for (int d : dims) D *= d;
  if (D > kMaxFullExpDim) throw ResourceLimit("Laplacian block too large for a dense operator");
  const int g = static_cast<int>(W.rows());
  std::vector<std::array<CMatrix, 3>> Jf(g);
  for (int a = 0; a < g; ++a)
    for (int mu = 0; mu < 3; ++mu) Jf[a][mu] = CMatrix::Zero(D, D);
  for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
    if (slots[s].factor < 0 || slots[s].factor >= g) throw DomainError("slot factor out of range");
    auto J = spin_operators(slots[s].spin);
    for (int mu = 0; mu < 3; ++mu) Jf[slots[s].factor][mu] += detail::embed_slot_operator(J[mu], s, dims);
  }
  CMatrix L = CMatrix::Zero(D, D);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      if (W(a, b) == Complex(0)) continue;
      for (int mu = 0; mu < 3; ++mu) L += W(a, b) * Jf[a][mu] * Jf[b][mu];
    }
  return L * Complex(0, 1.0 / (2 * std::numbers::pi));
}

inline CMatrix su2_laplacian_block(const std::vector<int>& spins, const PeriodMatrix& W) {
  if (static_cast<int>(spins.size()) != W.rows()) throw DomainError("one spin per factor");
  std::vector<Slot> slots;
  for (int a = 0; a < static_cast<int>(spins.size()); ++a) slots.push_back({a, spins[a]});
  return laplacian_block(slots, W);
}

// -Delta eigenvalue for diagonal W: -(i / 2 pi) sum_a W_aa c(j_a).
inline Complex laplacian_eigenvalue(const std::vector<int>& spins, const PeriodMatrix& W) {
  if (!detail::is_diagonal(W)) throw DomainError("scalar eigenvalue only defined for diagonal period matrix");
  Complex s = 0;
  for (int a = 0; a < static_cast<int>(spins.size()); ++a) s += W(a, a) * (spins[a] * (spins[a] + 2) / 4.0);
  return -s * Complex(0, 1.0 / (2 * std::numbers::pi));
}

// exp((t/2) L) B, factorwise when W is diagonal.
inline CMatrix heat_block(const PWBlock& blk, const PeriodMatrix& W, double t) {
  if (t == 0) return blk.B;
  const auto dims = detail::slot_dims(blk.slots);
  const int g = static_cast<int>(W.rows());
  if (detail::is_diagonal(W)) {
    CMatrix B = blk.B;
    for (int a = 0; a < g; ++a) {
      std::vector<int> which;
      std::vector<Slot> sub;
      for (int s = 0; s < static_cast<int>(blk.slots.size()); ++s)
        if (blk.slots[s].factor == a) {
          which.push_back(s);
          sub.push_back({0, blk.slots[s].spin});
        }
      if (which.empty()) continue;
      PeriodMatrix w1(1, 1);
      w1(0, 0) = W(a, a);
      CMatrix K = (laplacian_block(sub, w1) * (t / 2)).exp();
      B = detail::apply_on_slots(K, which, dims, B);
    }
    return B;
  }
  CMatrix L = laplacian_block(blk.slots, W);
  return (L * (t / 2)).exp() * blk.B;
}

inline PWSeries nonabelian_cst(const PWSeries& f, const PeriodMatrix& W, double t) {
  if (t < 0) throw DomainError("t must be >= 0");
  validate_period_matrix(W);
  if (W.rows() != f.genus) throw DomainError("genus mismatch");
  PWSeries out{f.genus, {}};
  for (const auto& blk : f.blocks) {
    if (blk.dim() != blk.B.rows() || blk.B.rows() != blk.B.cols()) throw DomainError("block dimension mismatch");
    if (blk.dim() > kMaxBlockDim) throw ResourceLimit("block too large");
    out.blocks.push_back({blk.slots, heat_block(blk, W, t)});
  }
  return out;
}

inline Complex evaluate_block(const PWBlock& blk, const SchottkyPoint& x) {
  const auto dims = detail::slot_dims(blk.slots);
  CMatrix M = blk.B;
  for (int s = 0; s < static_cast<int>(blk.slots.size()); ++s) {
    const auto& sl = blk.slots[s];
    if (sl.factor < 0 || sl.factor >= static_cast<int>(x.size())) throw DomainError("point has too few factors");
    M = detail::apply_on_slots(rep_matrix(sl.spin, x[sl.factor]), {s}, dims, M);
  }
  return M.trace();
}

inline Complex evaluate(const PWSeries& f, const SchottkyPoint& x) {
  if (static_cast<int>(x.size()) != f.genus) throw DomainError("point must have one matrix per factor");
  Complex s = 0;
  for (const auto& blk : f.blocks) s += evaluate_block(blk, x);
  return s;
}

// Gauge-fixed spin network: tree edges identity, cotree edge alpha carries x_alpha along dart 2e.
struct GaugeFixing {
  SpanningTree tree;
  std::vector<Mat2> edges(const SchottkyPoint& x, int num_edges) const {
    std::vector<Mat2> m(num_edges, Mat2::Identity());
    for (std::size_t a = 0; a < tree.cotree.size(); ++a) m[tree.cotree[a]] = x.at(a);
    return m;
  }
};

inline PWSeries spin_network_series(const SpinNetwork& s) {
  const Graph& G = s.graph();
  GaugeFixing gf{spanning_tree(G)};
  const auto& cot = gf.tree.cotree;
  const int g = static_cast<int>(cot.size());
  const int E = G.num_edges();
  std::vector<Slot> slots;
  for (int a = 0; a < g; ++a) slots.push_back({a, s.spins()[cot[a]]});
  const auto dims = detail::slot_dims(slots);
  int D = 1;
  for (int d : dims) D *= d;
  if (static_cast<long long>(D) * D > 200'000) throw ResourceLimit("spin network block too large to extract");
  std::vector<CMatrix> M(E);
  for (int e = 0; e < E; ++e) M[e] = pairing_form(s.spins()[e]);
  // f(x) = sum_{P,Q} prod rho(x_a)_{P_a Q_a} c(P,Q);  tr(R B) gives B(Q,P) = c(P,Q)
  CMatrix B = CMatrix::Zero(D, D);
  std::vector<int> P(g), Q(g);
  for (int pi = 0; pi < D; ++pi)
    for (int qi = 0; qi < D; ++qi) {
      int rp = pi, rq = qi;
      for (int a = g - 1; a >= 0; --a) {
        P[a] = rp % dims[a];
        rp /= dims[a];
        Q[a] = rq % dims[a];
        rq /= dims[a];
      }
      std::vector<CMatrix> Mx = M;
      for (int a = 0; a < g; ++a) {
        CMatrix unit = CMatrix::Zero(dims[a], dims[a]);
        unit(P[a], Q[a]) = 1;
        Mx[cot[a]] = M[cot[a]] * unit;
      }
      B(qi, pi) = s.contract(Mx);
    }
  PWSeries out{g, {}};
  out.blocks.push_back({slots, B});
  return out;
}

enum class ThetaMode { Normalized, Literal };

struct NonabelianThetaOptions {
  ThetaMode mode = ThetaMode::Normalized;
  int cutoff = 8;  // twice-spin bound on the delta series
  double tol = 1e-8;
};

struct NonabelianThetaResult {
  Complex value;
  int blocks = 0;
  double last_shell = 0;  // |contribution| of the outermost delta shell
};

inline void check_level_coloring(const SpinNetwork& s, int k) {
  const Graph& G = s.graph();
  for (int n : s.spins())
    if (n > k) throw AdmissibilityError("coloring exceeds level " + std::to_string(k));
  for (int v = 0; v < G.num_vertices(); ++v) {
    const auto& st = G.star(v);
    if (!vertex_admissible(k, s.spins()[st[0] >> 1], s.spins()[st[1] >> 1], s.spins()[st[2] >> 1]))
      throw AdmissibilityError("coloring is not level-" + std::to_string(k) + " admissible at vertex " +
                               std::to_string(v));
  }
}

// Normalized: CST_{1/k}(f).  Literal: CST_{1/k}(f * sum_j dim(j) chi_j) cut at `cutoff`.
inline NonabelianThetaResult nonabelian_theta(const SpinNetwork& s, int k, const PeriodMatrix& W,
                                              const SchottkyPoint& p, const NonabelianThetaOptions& opt = {}) {
  if (k < 1) throw DomainError("level must be positive");
  check_level_coloring(s, k);
  validate_period_matrix(W);
  PWSeries f = spin_network_series(s);
  if (W.rows() != f.genus) throw DomainError("period matrix size must equal the first Betti number");
  if (static_cast<int>(p.size()) != f.genus) throw DomainError("Schottky point must have g matrices");
  const double t = 1.0 / k;
  NonabelianThetaResult r;
  if (opt.mode == ThetaMode::Normalized) {
    r.value = evaluate(nonabelian_cst(f, W, t), p);
    r.blocks = 1;
    return r;
  }
  if (opt.cutoff < 0) throw DomainError("cutoff must be >= 0");
  const PWBlock& fb = f.blocks[0];
  const int g = f.genus;
  std::vector<int> j(g, 0);
  Complex total = 0, shell = 0;
  while (true) {
    PWBlock blk;
    blk.slots = fb.slots;
    double dimprod = 1;
    int dj = 1;
    for (int a = 0; a < g; ++a) {
      blk.slots.push_back({a, j[a]});
      dimprod *= j[a] + 1;
      dj *= j[a] + 1;
    }
    if (blk.dim() > kMaxBlockDim) throw ResourceLimit("literal delta block too large; lower the cutoff");
    blk.B = Eigen::kroneckerProduct(fb.B, CMatrix::Identity(dj, dj) * dimprod).eval();
    PWBlock hb{blk.slots, heat_block(blk, W, t)};
    const Complex v = evaluate_block(hb, p);
    total += v;
    if (*std::max_element(j.begin(), j.end()) == opt.cutoff) shell += v;
    ++r.blocks;
    int a = g - 1;
    while (a >= 0 && ++j[a] > opt.cutoff) j[a--] = 0;
    if (a < 0) break;
  }
  r.value = total;
  r.last_shell = std::abs(shell);
  if (r.last_shell > opt.tol * std::max(1.0, std::abs(total)))
    throw ConvergenceError("delta series not converged at cutoff " + std::to_string(opt.cutoff) +
                           ": outer shell contributes " + std::to_string(r.last_shell));
  return r;
}

}  // namespace verlinde
