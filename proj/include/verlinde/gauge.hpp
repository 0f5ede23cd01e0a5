#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <queue>
#include <random>
#include <thread>
#include <vector>

#include "verlinde/error.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/su2.hpp"

namespace verlinde {

// One matrix per unoriented edge, read along dart 2e; dart 2e+1 carries the inverse.
struct GaugeConnection {
  std::shared_ptr<const Graph> graph;
  std::vector<Mat2> edge;

  Mat2 at_dart(int d) const {
    const Mat2& a = edge.at(d >> 1);
    return (d & 1) ? Mat2(a.inverse()) : a;
  }
};

using GaugeTransform = std::vector<Mat2>;  // per vertex

inline GaugeConnection identity_connection(std::shared_ptr<const Graph> g) {
  return {g, std::vector<Mat2>(g->num_edges(), Mat2::Identity())};
}

template <class Rng>
GaugeConnection random_connection(std::shared_ptr<const Graph> g, Rng& rng) {
  GaugeConnection c{g, {}};
  for (int e = 0; e < g->num_edges(); ++e) c.edge.push_back(haar_su2(rng));
  return c;
}

// Path as a sequence of darts; each dart's far end must be the next dart's vertex.
inline Mat2 holonomy(const GaugeConnection& c, const std::vector<int>& path) {
  const Graph& g = *c.graph;
  Mat2 h = Mat2::Identity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int d = path[i];
    if (d < 0 || d >= g.num_darts()) throw PathError("dart " + std::to_string(d) + " out of range");
    if (g.vertex_of(d ^ 1) < 0) throw PathError("path runs off a parabolic leg");
    if (i + 1 < path.size() && g.vertex_of(d ^ 1) != g.vertex_of(path[i + 1]))
      throw PathError("darts " + std::to_string(d) + " and " + std::to_string(path[i + 1]) + " are not composable");
    h = h * c.at_dart(d);
  }
  return h;
}

inline GaugeConnection gauge_act(const GaugeConnection& c, const GaugeTransform& gt) {
  const Graph& g = *c.graph;
  if (static_cast<int>(gt.size()) != g.num_vertices()) throw DomainError("gauge transform needs one element per vertex");
  GaugeConnection out = c;
  for (int e = 0; e < g.num_edges(); ++e) {
    const int s = g.vertex_of(2 * e), t = g.vertex_of(2 * e + 1);
    Mat2 left = s >= 0 ? gt[s] : Mat2::Identity();
    Mat2 right = t >= 0 ? Mat2(gt[t].inverse()) : Mat2::Identity();
    out.edge[e] = left * c.edge[e] * right;
  }
  return out;
}

inline double conj_coordinate(const Mat2& a) {
  const double x = std::clamp(a.trace().real() / 2.0, -1.0, 1.0);
  return std::acos(x) / std::numbers::pi;
}

inline std::vector<double> conj_coordinates(const GaugeConnection& c) {
  std::vector<double> out;
  for (const auto& a : c.edge) out.push_back(conj_coordinate(a));
  return out;
}

// Generators a_1..a_g, b_1..b_g; a word uses 1..2g, negative for inverses.
inline Mat2 evaluate_word(const std::vector<Mat2>& gens, const std::vector<int>& word) {
  Mat2 h = Mat2::Identity();
  for (int l : word) {
    if (l == 0 || std::abs(l) > static_cast<int>(gens.size())) throw DomainError("letter out of range");
    h = h * (l > 0 ? gens[l - 1] : Mat2(gens[-l - 1].inverse()));
  }
  return h;
}

inline double relator_residual(const std::vector<Mat2>& gens) {
  if (gens.size() % 2) throw RepresentationError("need 2g generator images");
  const int g = static_cast<int>(gens.size()) / 2;
  Mat2 r = Mat2::Identity();
  for (int i = 0; i < g; ++i) {
    const Mat2& a = gens[i];
    const Mat2& b = gens[g + i];
    r = r * a * b * a.inverse() * b.inverse();
  }
  return (r - Mat2::Identity()).norm();
}

inline double goldman_function(const std::vector<Mat2>& gens, const std::vector<int>& loop) {
  const double res = relator_residual(gens);
  if (res > 1e-10) throw RepresentationError("surface relator violated, residual " + std::to_string(res));
  return conj_coordinate(evaluate_word(gens, loop));
}

inline GaugeConnection abelian_embed(std::shared_ptr<const Graph> g, const std::vector<double>& phases) {
  if (static_cast<int>(phases.size()) != g->num_edges()) throw DomainError("one phase per edge");
  GaugeConnection c{g, {}};
  for (double p : phases) c.edge.push_back(diag_su2(p));
  return c;
}

inline double u1_holonomy(const Graph& g, const std::vector<double>& phases, const std::vector<int>& path) {
  double s = 0;
  for (int d : path) {
    if (d < 0 || d >= g.num_darts()) throw PathError("dart out of range");
    s += (d & 1) ? -phases[d >> 1] : phases[d >> 1];
  }
  return s;
}

struct SpanningTree {
  std::vector<char> tree;        // per edge
  std::vector<int> parent_dart;  // per vertex, dart on the parent side; -1 at the root
  std::vector<int> cotree;       // internal non-tree edges, increasing
};

inline SpanningTree spanning_tree(const Graph& g) {
  if (!g.is_connected()) throw PreconditionError("graph must be connected");
  const int V = g.num_vertices();
  SpanningTree t;
  t.parent_dart.assign(V, -1);
  t.tree.assign(g.num_edges(), 0);
  std::vector<char> seen(V, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int d : g.star(v)) {
      const int w = g.vertex_of(d ^ 1);
      if (w < 0 || seen[w]) continue;
      seen[w] = 1;
      t.parent_dart[w] = d;
      t.tree[d >> 1] = 1;
      q.push(w);
    }
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (!t.tree[e] && !g.is_parabolic(e)) t.cotree.push_back(e);
  return t;
}

// Closed dart paths around each cotree edge of a BFS spanning tree.
inline std::vector<std::vector<int>> fundamental_cycles(const Graph& g) {
  const SpanningTree t = spanning_tree(g);
  auto root_path = [&](int v) {  // darts from root to v
    std::vector<int> p;
    while (t.parent_dart[v] >= 0) {
      p.push_back(t.parent_dart[v]);
      v = g.vertex_of(t.parent_dart[v]);
    }
    std::reverse(p.begin(), p.end());
    return p;
  };
  std::vector<std::vector<int>> out;
  for (int e : t.cotree) {
    auto p = root_path(g.vertex_of(2 * e));
    p.push_back(2 * e);
    auto back = root_path(g.vertex_of(2 * e + 1));
    for (auto it = back.rbegin(); it != back.rend(); ++it) p.push_back(*it ^ 1);
    out.push_back(p);
  }
  return out;
}

// Invariant form on V_n from the (n, n, 0) intertwiner.
inline CMatrix pairing_form(int n) {
  const CVector& v = wigner_3j(n, n, 0);
  CMatrix E(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) E(i, j) = std::sqrt(n + 1.0) * v(i * (n + 1) + j);
  return E;
}

class SpinNetwork {
 public:
  SpinNetwork(std::shared_ptr<const Graph> g, std::vector<int> twice_spins) : g_(std::move(g)), n_(std::move(twice_spins)) {
    const Graph& G = *g_;
    if (!G.is_closed()) throw PreconditionError("spin networks need a closed graph");
    if (static_cast<int>(n_.size()) != G.num_edges()) throw DomainError("one twice-spin per edge");
    for (int v = 0; v < G.num_vertices(); ++v) {
      const auto& s = G.star(v);
      if (s.size() != 3) throw PreconditionError("spin networks need trivalent vertices");
      const int a = n_[s[0] >> 1], b = n_[s[1] >> 1], c = n_[s[2] >> 1];
      if (!cg_admissible(a, b, c))
        throw AdmissibilityError("coloring fails Clebsch-Gordan conditions at vertex " + std::to_string(v));
      vertex_tensor_.push_back(&wigner_3j(a, b, c));
    }
    for (int x : n_) forms_.push_back(pairing_form(x));
    long long size = 1;
    for (int x : n_) size *= x + 1;
    if (size > 50'000'000) throw ResourceLimit("spin network contraction too large");
  }

  const Graph& graph() const { return *g_; }
  std::shared_ptr<const Graph> graph_ptr() const { return g_; }
  const std::vector<int>& spins() const { return n_; }

  // Contraction with edge matrices M_e on the pair (dart 2e, dart 2e+1).
  Complex contract(const std::vector<CMatrix>& M) const {
    const Graph& G = *g_;
    const int E = G.num_edges(), V = G.num_vertices();
    // Fold each M_e into the vertex tensor at dart 2e+1.
    std::vector<CVector> T(V);
    std::vector<std::array<int, 3>> slot_edge(V), stride(V);
    for (int v = 0; v < V; ++v) {
      T[v] = *vertex_tensor_[v];
      const auto& s = G.star(v);
      for (int i = 0; i < 3; ++i) slot_edge[v][i] = s[i] >> 1;
      const int d0 = n_[slot_edge[v][0]] + 1, d1 = n_[slot_edge[v][1]] + 1, d2 = n_[slot_edge[v][2]] + 1;
      stride[v] = {d1 * d2, d2, 1};
      const std::array<int, 3> dims{d0, d1, d2};
      for (int i = 0; i < 3; ++i) {
        if (!(s[i] & 1)) continue;
        const CMatrix& m = M[s[i] >> 1];
        CVector out = CVector::Zero(T[v].size());
        for (int idx = 0; idx < T[v].size(); ++idx) {
          const int j = (idx / stride[v][i]) % dims[i];
          const int base = idx - j * stride[v][i];
          for (int r = 0; r < dims[i]; ++r) out(base + r * stride[v][i]) += m(r, j) * T[v](idx);
        }
        T[v] = out;
      }
    }
    std::vector<int> idx(E, 0);
    Complex total = 0;
    while (true) {
      Complex p = 1;
      for (int v = 0; v < V && p != Complex(0); ++v) {
        int flat = 0;
        for (int i = 0; i < 3; ++i) flat += idx[slot_edge[v][i]] * stride[v][i];
        p *= T[v](flat);
      }
      total += p;
      int e = E - 1;
      while (e >= 0 && ++idx[e] > n_[e]) idx[e--] = 0;
      if (e < 0) break;
    }
    return total;
  }

  Complex value(const GaugeConnection& c) const {
    if (c.graph->num_edges() != g_->num_edges()) throw DomainError("connection lives on another graph");
    std::vector<CMatrix> M;
    for (int e = 0; e < g_->num_edges(); ++e) M.push_back(forms_[e] * rep_matrix(n_[e], c.edge[e]));
    return contract(M);
  }

  // Value on arbitrary SL(2,C) edge elements.
  Complex value(const std::vector<Mat2>& edge_elements) const {
    return value(GaugeConnection{g_, edge_elements});
  }

 private:
  std::shared_ptr<const Graph> g_;
  std::vector<int> n_;
  std::vector<const CVector*> vertex_tensor_;
  std::vector<CMatrix> forms_;
};

inline Complex spin_network_value(const SpinNetwork& s, const GaugeConnection& c) { return s.value(c); }

struct InnerProductEstimate {
  Complex mean;
  double std_error = 0;
  long long samples = 0;
};

// <f1, f2> = E_Haar[conj(f1) f2]; fixed-size chunks seeded by (seed, chunk) so
// the result does not depend on the thread count.
inline InnerProductEstimate peter_weyl_inner(const SpinNetwork& f1, const SpinNetwork& f2, long long samples,
                                             unsigned long long seed = 0, int threads = 1) {
  if (f1.graph().num_edges() != f2.graph().num_edges()) throw DomainError("networks on different graphs");
  constexpr long long chunk = 4096;
  const long long nchunks = (samples + chunk - 1) / chunk;
  std::vector<Complex> sum(nchunks, 0);
  std::vector<double> sq(nchunks, 0);
  auto work = [&](long long c0, long long step) {
    for (long long c = c0; c < nchunks; c += step) {
      std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<unsigned long long>(c));
      const long long n = std::min(chunk, samples - c * chunk);
      for (long long i = 0; i < n; ++i) {
        auto a = random_connection(f1.graph_ptr(), rng);
        Complex x = std::conj(f1.value(a)) * f2.value(a);
        sum[c] += x;
        sq[c] += std::norm(x);
      }
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& t : pool) t.join();
  }
  Complex s = 0;
  double q = 0;
  for (long long c = 0; c < nchunks; ++c) {
    s += sum[c];
    q += sq[c];
  }
  InnerProductEstimate r;
  r.samples = samples;
  r.mean = s / double(samples);
  const double var = std::max(0.0, q / double(samples) - std::norm(r.mean));
  r.std_error = std::sqrt(var / double(samples));
  return r;
}

struct DistinguishReport {
  double max_difference = 0;
  long long witness_sample = -1;  // 0 is the identity connection
  bool separated = false;
  long long samples = 0;
};

inline DistinguishReport distinguishability_probe(const SpinNetwork& f1, const SpinNetwork& f2, long long samples,
                                                  unsigned long long seed = 0) {
  if (f1.graph().num_edges() != f2.graph().num_edges() || f1.graph().num_vertices() != f2.graph().num_vertices())
    throw DomainError("networks on different graphs");
  DistinguishReport r;
  r.samples = samples;
  std::mt19937_64 rng(seed);
  for (long long i = 0; i < samples; ++i) {
    auto a = i == 0 ? identity_connection(f1.graph_ptr()) : random_connection(f1.graph_ptr(), rng);
    const double d = std::abs(f1.value(a) - f2.value(a));
    if (d > r.max_difference) {
      r.max_difference = d;
      r.witness_sample = i;
    }
  }
  r.separated = r.max_difference > 1e-6;
  return r;
}

}  // namespace verlinde
