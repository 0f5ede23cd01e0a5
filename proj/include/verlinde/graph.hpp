#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "verlinde/error.hpp"

namespace verlinde {

// Half-edge conventions: edge e owns darts 2e and 2e+1, the edge involution
// is d ^ 1.  Dart 2e+1 of a parabolic leg is the free end.
using Dart = int;
inline constexpr int kFreeEnd = -1;

inline constexpr Dart mate(Dart d) { return d ^ 1; }
inline constexpr int edge_of(Dart d) { return d >> 1; }

class Graph {
 public:
  Graph() = default;

  Graph(int num_vertices, std::vector<std::array<int, 2>> ends)
      : nv_(num_vertices), ends_(std::move(ends)) {
    build();
  }

  static Graph with_legs(int num_vertices, std::vector<std::array<int, 2>> internal,
                         const std::vector<int>& leg_vertices) {
    for (int v : leg_vertices) internal.push_back({v, kFreeEnd});
    return Graph(num_vertices, std::move(internal));
  }

  int num_vertices() const { return nv_; }
  int num_edges() const { return static_cast<int>(ends_.size()); }
  int num_darts() const { return 2 * num_edges(); }
  const std::vector<std::array<int, 2>>& edge_ends() const { return ends_; }
  const std::array<int, 2>& ends(int e) const { return ends_.at(e); }

  int vertex_of(Dart d) const { return ends_[d >> 1][d & 1]; }
  const std::vector<Dart>& star(int v) const { return stars_.at(v); }
  int valence(int v) const { return static_cast<int>(stars_.at(v).size()); }
  // Index of d inside star(vertex_of(d)).
  int star_position(Dart d) const { return pos_[d]; }

  bool is_loop(int e) const { return ends_[e][0] == ends_[e][1]; }
  bool is_parabolic(int e) const { return ends_[e][1] == kFreeEnd; }

  int num_parabolic() const {
    return static_cast<int>(std::count_if(ends_.begin(), ends_.end(),
                                          [](const auto& p) { return p[1] == kFreeEnd; }));
  }
  int num_internal_edges() const { return num_edges() - num_parabolic(); }
  int num_loops() const {
    int n = 0;
    for (int e = 0; e < num_edges(); ++e) n += is_loop(e);
    return n;
  }
  bool is_closed() const { return num_parabolic() == 0; }

  bool is_trivalent() const {
    for (int v = 0; v < nv_; ++v)
      if (valence(v) != 3) return false;
    return true;
  }

  int num_components() const {
    std::vector<int> parent(nv_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int comps = nv_;
    for (const auto& p : ends_) {
      if (p[1] == kFreeEnd) continue;
      int a = find(p[0]), b = find(p[1]);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps;
  }
  bool is_connected() const { return nv_ > 0 && num_components() == 1; }

  // First Betti number of the underlying 1-complex (legs contract away).
  int betti() const { return num_internal_edges() - nv_ + num_components(); }

  bool operator==(const Graph& o) const { return nv_ == o.nv_ && ends_ == o.ends_; }

 private:
  void build() {
    if (nv_ < 0) throw StructuralError("negative vertex count");
    stars_.assign(nv_, {});
    pos_.assign(2 * ends_.size(), -1);
    for (std::size_t e = 0; e < ends_.size(); ++e) {
      const auto& p = ends_[e];
      if (p[0] < 0 || p[0] >= nv_)
        throw StructuralError("edge " + std::to_string(e) + " has an invalid first end");
      if (p[1] != kFreeEnd && (p[1] < 0 || p[1] >= nv_))
        throw StructuralError("edge " + std::to_string(e) + " has an invalid second end");
    }
    for (Dart d = 0; d < num_darts(); ++d) {
      int v = vertex_of(d);
      if (v == kFreeEnd) continue;
      pos_[d] = static_cast<int>(stars_[v].size());
      stars_[v].push_back(d);
    }
  }

  int nv_ = 0;
  std::vector<std::array<int, 2>> ends_;
  std::vector<std::vector<Dart>> stars_;
  std::vector<int> pos_;
};

// ---------------------------------------------------------------------------
// genus and standard graphs

inline int genus(const Graph& g) {
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.valence(v) != 3)
      throw StructuralError("vertex " + std::to_string(v) + " has valence " +
                            std::to_string(g.valence(v)));
  if (!g.is_connected()) throw StructuralError("graph is not connected");
  if (g.is_closed()) {
    if (g.num_vertices() % 2 != 0 || 2 * g.num_edges() != 3 * g.num_vertices())
      throw StructuralError("closed trivalent graph violates the Euler relations");
    return g.num_vertices() / 2 + 1;
  }
  return g.betti();
}

inline Graph theta_graph() { return Graph(2, {{0, 1}, {0, 1}, {0, 1}}); }
inline Graph dumbbell_graph() { return Graph(2, {{0, 0}, {0, 1}, {1, 1}}); }
inline Graph k4_graph() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

// Necklace of g-1 double edges joined cyclically by single edges.
inline Graph multi_theta_graph(int g) {
  if (g < 2) throw DomainError("multi theta graph needs g >= 2");
  int m = g - 1;
  std::vector<std::array<int, 2>> ends;
  for (int i = 0; i < m; ++i) {
    int a = 2 * i, b = 2 * i + 1, c = (2 * i + 2) % (2 * m);
    ends.push_back({a, b});
    ends.push_back({a, b});
    ends.push_back({b, c});
  }
  return Graph(2 * m, std::move(ends));
}

// Chain with a loop at each end: the graph of a chain of handles.
inline Graph chain_graph(int g) {
  if (g < 2) throw DomainError("chain graph needs g >= 2");
  int nv = 2 * g - 2;
  std::vector<std::array<int, 2>> ends;
  ends.push_back({0, 0});
  for (int i = 0; i + 1 < nv; ++i) {
    ends.push_back({i, i + 1});
    if (i % 2 == 1) ends.push_back({i, i + 1});
  }
  ends.push_back({nv - 1, nv - 1});
  return Graph(nv, std::move(ends));
}

// ---------------------------------------------------------------------------
// canonical form

struct CanonicalForm {
  std::vector<int> code;
  std::vector<int> order;  // order[position] = vertex
};

namespace detail {

struct MultiAdjacency {
  int n = 0;
  std::vector<std::vector<int>> a;  // a[i][i] counts loops
  std::vector<int> legs;
};

inline MultiAdjacency adjacency(const Graph& g) {
  MultiAdjacency m;
  m.n = g.num_vertices();
  m.a.assign(m.n, std::vector<int>(m.n, 0));
  m.legs.assign(m.n, 0);
  for (const auto& p : g.edge_ends()) {
    if (p[1] == kFreeEnd) {
      ++m.legs[p[0]];
    } else if (p[0] == p[1]) {
      ++m.a[p[0]][p[0]];
    } else {
      ++m.a[p[0]][p[1]];
      ++m.a[p[1]][p[0]];
    }
  }
  return m;
}

inline std::vector<int> rank_by(const std::vector<std::vector<int>>& sig) {
  std::vector<std::vector<int>> sorted = sig;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[i]) - sorted.begin());
  return out;
}

inline std::vector<int> refine(const MultiAdjacency& m, std::vector<int> colors) {
  int ncolors = -1;
  while (true) {
    std::vector<std::vector<int>> sig(m.n);
    for (int v = 0; v < m.n; ++v) {
      std::vector<std::pair<int, int>> nb;
      for (int u = 0; u < m.n; ++u)
        if (u != v && m.a[v][u] > 0) nb.push_back({colors[u], m.a[v][u]});
      std::sort(nb.begin(), nb.end());
      sig[v].push_back(colors[v]);
      for (auto [c, k] : nb) {
        sig[v].push_back(c);
        sig[v].push_back(k);
      }
    }
    colors = rank_by(sig);
    int nc = *std::max_element(colors.begin(), colors.end()) + 1;
    if (nc == ncolors) return colors;
    ncolors = nc;
  }
}

inline std::vector<int> encode(const MultiAdjacency& m, const std::vector<int>& order) {
  std::vector<int> code;
  code.push_back(m.n);
  for (int i = 0; i < m.n; ++i) {
    code.push_back(m.a[order[i]][order[i]]);
    code.push_back(m.legs[order[i]]);
  }
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) code.push_back(m.a[order[i]][order[j]]);
  return code;
}

inline void search(const MultiAdjacency& m, std::vector<int> colors, CanonicalForm& best, bool& have) {
  colors = refine(m, colors);
  int nc = *std::max_element(colors.begin(), colors.end()) + 1;
  if (nc == m.n) {
    std::vector<int> order(m.n);
    for (int v = 0; v < m.n; ++v) order[colors[v]] = v;
    auto code = encode(m, order);
    if (!have || code < best.code) {
      best.code = std::move(code);
      best.order = std::move(order);
      have = true;
    }
    return;
  }
  std::vector<int> size(nc, 0);
  for (int c : colors) ++size[c];
  int target = 0;
  while (size[target] == 1) ++target;
  for (int v = 0; v < m.n; ++v) {
    if (colors[v] != target) continue;
    std::vector<int> next(m.n);
    for (int u = 0; u < m.n; ++u) next[u] = 2 * colors[u] + (colors[u] == target && u != v ? 1 : 0);
    search(m, next, best, have);
  }
}

}  // namespace detail

inline CanonicalForm canonical_form(const Graph& g) {
  auto m = detail::adjacency(g);
  CanonicalForm best;
  if (m.n == 0) {
    best.code = {0, g.num_parabolic()};
    return best;
  }
  std::vector<std::vector<int>> sig(m.n);
  for (int v = 0; v < m.n; ++v) sig[v] = {g.valence(v), m.a[v][v], m.legs[v]};
  bool have = false;
  detail::search(m, detail::rank_by(sig), best, have);
  return best;
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  return canonical_form(a).code == canonical_form(b).code;
}

// Relabelled copy in canonical vertex order with sorted edge list.
inline Graph canonical_graph(const Graph& g) {
  auto cf = canonical_form(g);
  int n = g.num_vertices();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[cf.order[i]] = i;
  std::vector<std::array<int, 2>> internal;
  std::vector<int> legs;
  for (const auto& p : g.edge_ends()) {
    if (p[1] == kFreeEnd) {
      legs.push_back(pos[p[0]]);
    } else {
      int a = pos[p[0]], b = pos[p[1]];
      internal.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(internal.begin(), internal.end());
  std::sort(legs.begin(), legs.end());
  return Graph::with_legs(n, std::move(internal), legs);
}

// All connected closed trivalent multigraphs of genus g up to isomorphism,
// in increasing canonical-code order.
inline std::vector<Graph> enumerate_trivalent(int g) {
  if (g < 2) throw DomainError("no closed trivalent graph of genus " + std::to_string(g));
  if (g > 5) throw ResourceLimit("enumerate_trivalent is limited to g <= 5");
  const int n = 2 * g - 2;
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  std::vector<int> rem(n, 3);
  std::vector<int> parent(n, 0);
  std::map<std::vector<int>, Graph> classes;

  auto emit = [&]() {
    std::vector<std::array<int, 2>> ends;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int c = 0; c < a[i][j]; ++c) ends.push_back({i, j});
    Graph gr(n, std::move(ends));
    if (!gr.is_connected()) return;
    auto code = canonical_form(gr).code;
    if (!classes.count(code)) classes.emplace(std::move(code), canonical_graph(gr));
  };

  // Fill row i from column j onward.
  auto rec = [&](auto&& self, int i, int j) -> void {
    if (i == n) {
      emit();
      return;
    }
    if (j == n) {
      if (rem[i] == 0) self(self, i + 1, i + 1);
      return;
    }
    if (j == i) {
      // Only labellings in breadth-first discovery order are generated:
      // the smallest earlier neighbour of each vertex is nondecreasing.
      if (i > 0) {
        int p = 0;
        while (p < i && a[p][i] == 0) ++p;
        if (p == i || p < parent[i - 1]) return;
        parent[i] = p;
      }
      for (int loops = rem[i] / 2; loops >= 0; --loops) {
        a[i][i] = loops;
        rem[i] -= 2 * loops;
        self(self, i, j + 1);
        rem[i] += 2 * loops;
        a[i][i] = 0;
      }
      return;
    }
    int hi = std::min(rem[i], rem[j]);
    // Remaining capacity to the right must absorb what is left of row i.
    int cap = 0;
    for (int t = j + 1; t < n; ++t) cap += rem[t];
    for (int c = hi; c >= 0; --c) {
      if (rem[i] - c > cap) break;
      a[i][j] = a[j][i] = c;
      rem[i] -= c;
      rem[j] -= c;
      self(self, i, j + 1);
      rem[i] += c;
      rem[j] += c;
      a[i][j] = a[j][i] = 0;
    }
  };
  rec(rec, 0, 0);

  std::vector<Graph> out;
  for (auto& [code, gr] : classes) out.push_back(gr);
  return out;
}

// ---------------------------------------------------------------------------
// moves

struct Contraction {
  Graph graph;
  int merged_vertex = -1;
  std::vector<int> edge_map;    // old edge -> new edge, -1 for the contracted edge
  std::vector<int> vertex_map;  // old vertex -> new vertex
  // Darts of the merged vertex that came from each end, in the new graph.
  std::vector<Dart> from_first;
  std::vector<Dart> from_second;
};

inline Contraction contract_edge(const Graph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw InvalidMove("edge index out of range");
  if (g.is_parabolic(e)) throw InvalidMove("cannot contract a parabolic leg");
  if (g.is_loop(e)) throw InvalidMove("cannot contract a loop");
  const int a = g.ends(e)[0], b = g.ends(e)[1];
  Contraction c;
  c.vertex_map.resize(g.num_vertices());
  for (int v = 0, nv = 0; v < g.num_vertices(); ++v) {
    if (v == b) continue;
    c.vertex_map[v] = nv++;
  }
  c.vertex_map[b] = c.vertex_map[a];
  c.merged_vertex = c.vertex_map[a];
  c.edge_map.assign(g.num_edges(), -1);
  std::vector<std::array<int, 2>> ends;
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e) continue;
    c.edge_map[f] = static_cast<int>(ends.size());
    auto p = g.ends(f);
    for (auto& x : p)
      if (x != kFreeEnd) x = c.vertex_map[x];
    ends.push_back(p);
  }
  c.graph = Graph(g.num_vertices() - 1, std::move(ends));
  auto remap = [&](Dart d) { return 2 * c.edge_map[edge_of(d)] + (d & 1); };
  for (Dart d : g.star(a))
    if (edge_of(d) != e) c.from_first.push_back(remap(d));
  for (Dart d : g.star(b))
    if (edge_of(d) != e) c.from_second.push_back(remap(d));
  return c;
}

using DartPair = std::array<Dart, 2>;

// Replace a 4-valent vertex by an edge; darts of `moved` go to a new vertex.
inline Graph expand_vertex(const Graph& g, int v, const DartPair& kept, const DartPair& moved) {
  if (v < 0 || v >= g.num_vertices()) throw InvalidMove("vertex index out of range");
  if (g.valence(v) != 4) throw InvalidMove("expansion needs a 4-valent vertex");
  std::vector<Dart> given{kept[0], kept[1], moved[0], moved[1]};
  std::sort(given.begin(), given.end());
  std::vector<Dart> star = g.star(v);
  std::sort(star.begin(), star.end());
  if (given != star) throw InvalidMove("partition does not split the star into two pairs");
  auto ends = g.edge_ends();
  const int nv = g.num_vertices();
  for (Dart d : moved) ends[edge_of(d)][d & 1] = nv;
  ends.push_back({v, nv});
  return Graph(nv + 1, std::move(ends));
}

struct ElementaryTransformation {
  std::array<Graph, 2> graphs;
  std::vector<int> correspondence;  // edge of the input -> edge of each output
  bool loop_edge = false;
  // The darts (x1, x2) at the first end and (y1, y2) at the second end of e.
  std::array<Dart, 2> x{-1, -1};
  std::array<Dart, 2> y{-1, -1};
};

// The two non-identity re-expansions of the contraction of e.  The first
// keeps {x1, y1} at the first end, the second keeps {x1, y2}.  Edge ids are
// preserved so the correspondence is the identity.
inline ElementaryTransformation elementary_transformations(const Graph& g, int e) {
  if (e < 0 || e >= g.num_edges()) throw InvalidMove("edge index out of range");
  if (g.is_parabolic(e)) throw InvalidMove("parabolic legs admit no elementary transformation");
  ElementaryTransformation r;
  r.correspondence.resize(g.num_edges());
  std::iota(r.correspondence.begin(), r.correspondence.end(), 0);
  if (g.is_loop(e)) {
    r.graphs = {g, g};
    r.loop_edge = true;
    return r;
  }
  const int a = g.ends(e)[0], b = g.ends(e)[1];
  std::vector<Dart> xs, ys;
  for (Dart d : g.star(a))
    if (edge_of(d) != e) xs.push_back(d);
  for (Dart d : g.star(b))
    if (edge_of(d) != e) ys.push_back(d);
  if (xs.size() != 2 || ys.size() != 2) throw InvalidMove("edge ends must be trivalent");
  r.x = {xs[0], xs[1]};
  r.y = {ys[0], ys[1]};
  for (int which = 0; which < 2; ++which) {
    auto ends = g.edge_ends();
    Dart to_a = which == 0 ? ys[0] : ys[1];
    ends[edge_of(to_a)][to_a & 1] = a;
    ends[edge_of(xs[1])][xs[1] & 1] = b;
    r.graphs[which] = Graph(g.num_vertices(), std::move(ends));
  }
  return r;
}

// Breadth-first search over elementary transformations from `start`;
// returns canonical codes of every reachable class.
inline std::set<std::vector<int>> move_closure(const Graph& start) {
  std::set<std::vector<int>> seen;
  std::queue<Graph> q;
  seen.insert(canonical_form(start).code);
  q.push(canonical_graph(start));
  while (!q.empty()) {
    Graph g = q.front();
    q.pop();
    for (int e = 0; e < g.num_edges(); ++e) {
      if (g.is_loop(e) || g.is_parabolic(e)) continue;
      auto t = elementary_transformations(g, e);
      for (const auto& h : t.graphs) {
        auto code = canonical_form(h).code;
        if (seen.insert(code).second) q.push(canonical_graph(h));
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// ribbon structures and faces

struct RibbonStructure {
  std::vector<std::vector<Dart>> cyclic_order;  // per vertex
};

inline void validate_ribbon(const Graph& g, const RibbonStructure& r) {
  if (static_cast<int>(r.cyclic_order.size()) != g.num_vertices())
    throw StructuralError("ribbon structure must give an order at every vertex");
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto a = r.cyclic_order[v];
    auto b = g.star(v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw StructuralError("cyclic order at vertex " + std::to_string(v) + " is not a permutation of its star");
  }
}

inline RibbonStructure default_ribbon(const Graph& g) {
  RibbonStructure r;
  for (int v = 0; v < g.num_vertices(); ++v) r.cyclic_order.push_back(g.star(v));
  return r;
}

// Successor table of the cyclic orders, indexed by dart.
inline std::vector<Dart> ribbon_successor(const Graph& g, const RibbonStructure& r) {
  validate_ribbon(g, r);
  std::vector<Dart> next(g.num_darts(), -1);
  for (const auto& cyc : r.cyclic_order)
    for (std::size_t i = 0; i < cyc.size(); ++i) next[cyc[i]] = cyc[(i + 1) % cyc.size()];
  return next;
}

struct FaceReport {
  std::vector<std::vector<Dart>> faces;
  int surface_genus = 0;
  bool planar = false;
};

inline FaceReport trace_faces(const Graph& g, const RibbonStructure& r) {
  if (!g.is_closed()) throw PreconditionError("face tracing needs a closed graph");
  if (!g.is_connected()) throw PreconditionError("face tracing needs a connected graph");
  auto next = ribbon_successor(g, r);
  FaceReport rep;
  std::vector<char> used(g.num_darts(), 0);
  for (Dart s = 0; s < g.num_darts(); ++s) {
    if (used[s]) continue;
    std::vector<Dart> face;
    for (Dart d = s; !used[d]; d = next[mate(d)]) {
      used[d] = 1;
      face.push_back(d);
    }
    rep.faces.push_back(std::move(face));
  }
  int chi = g.num_vertices() - g.num_edges() + static_cast<int>(rep.faces.size());
  rep.surface_genus = (2 - chi) / 2;
  rep.planar = rep.surface_genus == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// connections on graphs (identifications of stars along edges)

using Permutation = std::vector<int>;

inline std::vector<int> cycle_type(const Permutation& p) {
  std::vector<int> out;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = static_cast<int>(i); !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

class GraphConnection {
 public:
  // transport[a][i] is the star position at vertex_of(mate a) of the image of
  // the dart at star position i of vertex_of(a).
  GraphConnection(Graph g, std::vector<Permutation> transport)
      : g_(std::move(g)), t_(std::move(transport)) {
    if (!g_.is_closed()) throw PreconditionError("connections are defined on closed graphs");
    if (static_cast<int>(t_.size()) != g_.num_darts())
      throw StructuralError("transport must be given for every oriented edge");
    for (Dart a = 0; a < g_.num_darts(); ++a) {
      const int n = g_.valence(g_.vertex_of(a));
      if (static_cast<int>(t_[a].size()) != n || g_.valence(g_.vertex_of(mate(a))) != n)
        throw StructuralError("transport size mismatch on dart " + std::to_string(a));
      auto s = t_[a];
      std::sort(s.begin(), s.end());
      for (int i = 0; i < n; ++i)
        if (s[i] != i) throw StructuralError("transport is not a bijection");
    }
    for (Dart a = 0; a < g_.num_darts(); ++a)
      if (t_[mate(a)] != inverse(t_[a]))
        throw StructuralError("transport of the reversed edge must be the inverse");
  }

  const Graph& graph() const { return g_; }
  const Permutation& transport(Dart a) const { return t_[a]; }

  Dart apply(Dart a, Dart x) const {
    int w = g_.vertex_of(mate(a));
    return g_.star(w)[t_[a][g_.star_position(x)]];
  }

  bool is_adapted() const {
    for (Dart a = 0; a < g_.num_darts(); ++a)
      if (apply(a, a) != mate(a)) return false;
    return true;
  }

 private:
  Graph g_;
  std::vector<Permutation> t_;
};

// The connection determined by cyclic orders: rotation by m at the source
// goes to rotation by -m at the target.
inline GraphConnection ribbon_connection(const Graph& g, const RibbonStructure& r) {
  validate_ribbon(g, r);
  std::vector<int> cpos(g.num_darts(), -1);
  for (const auto& cyc : r.cyclic_order)
    for (std::size_t i = 0; i < cyc.size(); ++i) cpos[cyc[i]] = static_cast<int>(i);
  std::vector<Permutation> t(g.num_darts());
  for (Dart a = 0; a < g.num_darts(); ++a) {
    int v = g.vertex_of(a), w = g.vertex_of(mate(a));
    const auto& cv = r.cyclic_order[v];
    const auto& cw = r.cyclic_order[w];
    const int n = static_cast<int>(cv.size());
    t[a].assign(n, -1);
    for (int m = 0; m < n; ++m) {
      Dart x = cv[(cpos[a] + m) % n];
      Dart y = cw[((cpos[mate(a)] - m) % n + n) % n];
      t[a][g.star_position(x)] = g.star_position(y);
    }
  }
  return GraphConnection(g, std::move(t));
}

// Discrete gauge action: per vertex a permutation of star positions.
inline GraphConnection gauge_transform(const GraphConnection& c, const std::vector<Permutation>& gauge) {
  const Graph& g = c.graph();
  if (static_cast<int>(gauge.size()) != g.num_vertices())
    throw StructuralError("gauge transform needs one permutation per vertex");
  std::vector<Permutation> t(g.num_darts());
  for (Dart a = 0; a < g.num_darts(); ++a) {
    const auto& gs = gauge[g.vertex_of(a)];
    const auto& gt = gauge[g.vertex_of(mate(a))];
    auto gsi = inverse(gs);
    const auto& ta = c.transport(a);
    t[a].resize(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i) t[a][i] = gt[ta[gsi[i]]];
  }
  return GraphConnection(g, std::move(t));
}

// Monodromy around a closed dart path, as a permutation of star positions at
// the starting vertex.
inline Permutation monodromy(const GraphConnection& c, const std::vector<Dart>& path) {
  const Graph& g = c.graph();
  if (path.empty()) throw PathError("empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    Dart a = path[i], b = path[(i + 1) % path.size()];
    if (g.vertex_of(mate(a)) != g.vertex_of(b)) throw PathError("path is not closed and composable");
  }
  const int n = g.valence(g.vertex_of(path[0]));
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  for (Dart a : path) {
    const auto& t = c.transport(a);
    for (int& x : p) x = t[x];
  }
  return p;
}

struct Geodesic {
  std::vector<Dart> darts;
  std::vector<int> monodromy_class;  // cycle type in S(valence)
  bool flat = false;
  bool simple = false;  // no edge repeated
};

// Closed geodesics: cyclic non-backtracking dart sequences with
// a_{i+1} = T_{a_i}(mate a_{i-1}).  Each unoriented geodesic is reported once.
inline std::vector<Geodesic> geodesics(const GraphConnection& c) {
  const Graph& g = c.graph();
  if (!c.is_adapted()) throw PreconditionError("geodesics need an adapted connection");
  const int nd = g.num_darts();
  // state (p, a) encoded as p * nd + a
  std::vector<char> seen(static_cast<std::size_t>(nd) * nd, 0);
  std::set<std::vector<Dart>> reported;
  std::vector<Geodesic> out;
  auto canonical_rotation = [](std::vector<Dart> s) {
    auto best = s;
    for (std::size_t r = 1; r < s.size(); ++r) {
      std::rotate(s.begin(), s.begin() + 1, s.end());
      if (s < best) best = s;
    }
    return best;
  };
  for (Dart p = 0; p < nd; ++p) {
    int w = g.vertex_of(mate(p));
    for (Dart a : g.star(w)) {
      if (a == mate(p) || seen[p * nd + a]) continue;
      std::vector<Dart> seq;
      Dart cp = p, ca = a;
      while (!seen[cp * nd + ca]) {
        seen[cp * nd + ca] = 1;
        seq.push_back(ca);
        Dart nx = c.apply(ca, mate(cp));
        cp = ca;
        ca = nx;
      }
      auto fwd = canonical_rotation(seq);
      std::vector<Dart> rev;
      for (auto it = seq.rbegin(); it != seq.rend(); ++it) rev.push_back(mate(*it));
      rev = canonical_rotation(rev);
      if (reported.count(fwd) || reported.count(rev)) continue;
      reported.insert(fwd);
      Geodesic geo;
      geo.darts = fwd;
      auto m = monodromy(c, fwd);
      geo.monodromy_class = cycle_type(m);
      geo.flat = static_cast<int>(geo.monodromy_class.size()) == static_cast<int>(m.size());
      std::set<int> edges;
      geo.simple = true;
      for (Dart d : fwd)
        if (!edges.insert(edge_of(d)).second) geo.simple = false;
      out.push_back(std::move(geo));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Eulerian systems

struct EulerianReport {
  int invariant = 0;                          // e(Gamma)
  std::vector<std::vector<Dart>> witness;     // closed paths of a minimal system
  long long systems = 0;
};

namespace detail {
inline void derangements(const std::vector<int>& items, std::vector<std::vector<int>>& out) {
  std::vector<int> p(items.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] == static_cast<int>(i)) ok = false;
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
}
}  // namespace detail

// Minimal number of closed non-backtracking paths in a system using every
// oriented edge once.  A system is a choice of fixed-point-free transition
// at each vertex.
inline EulerianReport eulerian_invariant(const Graph& g) {
  if (!g.is_closed()) throw PreconditionError("Eulerian systems need a closed graph");
  if (!g.is_connected()) throw PreconditionError("Eulerian systems need a connected graph");
  const int nv = g.num_vertices();
  std::vector<std::vector<std::vector<int>>> choices(nv);
  for (int v = 0; v < nv; ++v) {
    detail::derangements(g.star(v), choices[v]);
    if (choices[v].empty()) throw PreconditionError("vertex of valence 1 admits no transition");
  }
  EulerianReport rep;
  rep.invariant = std::numeric_limits<int>::max();
  std::vector<int> idx(nv, 0);
  std::vector<Dart> next(g.num_darts());
  while (true) {
    ++rep.systems;
    for (int v = 0; v < nv; ++v) {
      const auto& s = g.star(v);
      const auto& p = choices[v][idx[v]];
      for (std::size_t i = 0; i < s.size(); ++i) next[s[i]] = s[p[i]];
    }
    std::vector<char> used(g.num_darts(), 0);
    std::vector<std::vector<Dart>> cycles;
    for (Dart s = 0; s < g.num_darts(); ++s) {
      if (used[s]) continue;
      std::vector<Dart> cyc;
      for (Dart d = s; !used[d]; d = next[mate(d)]) {
        used[d] = 1;
        cyc.push_back(d);
      }
      cycles.push_back(std::move(cyc));
    }
    if (static_cast<int>(cycles.size()) < rep.invariant) {
      rep.invariant = static_cast<int>(cycles.size());
      rep.witness = std::move(cycles);
    }
    int v = 0;
    while (v < nv && ++idx[v] == static_cast<int>(choices[v].size())) idx[v++] = 0;
    if (v == nv) break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// edge colorings

struct ChromaticReport {
  int chromatic_index = 0;
  std::vector<int> coloring;                    // per edge
  std::vector<std::vector<int>> even_cycle_cover;  // edge cycles, when index is 3
};

namespace detail {
inline bool color_edges(const Graph& g, int colors, std::vector<int>& col, int e) {
  if (e == g.num_edges()) return true;
  for (int c = 0; c < colors; ++c) {
    bool ok = true;
    for (int side = 0; side < 2 && ok; ++side) {
      int v = g.ends(e)[side];
      if (v == kFreeEnd) continue;
      for (Dart d : g.star(v))
        if (edge_of(d) < e && col[edge_of(d)] == c) ok = false;
    }
    if (!ok) continue;
    col[e] = c;
    if (color_edges(g, colors, col, e + 1)) return true;
  }
  col[e] = -1;
  return false;
}

inline std::vector<std::vector<int>> edge_cycles(const Graph& g, const std::vector<int>& edges) {
  // Components of a 2-regular edge set, each as a list of edges.
  std::vector<std::vector<int>> at(g.num_vertices());
  for (int e : edges) {
    at[g.ends(e)[0]].push_back(e);
    at[g.ends(e)[1]].push_back(e);
  }
  std::vector<char> used(g.num_edges(), 0);
  std::vector<std::vector<int>> out;
  for (int e0 : edges) {
    if (used[e0]) continue;
    std::vector<int> cyc;
    int e = e0, v = g.ends(e0)[1];
    while (!used[e]) {
      used[e] = 1;
      cyc.push_back(e);
      int nxt = at[v][0] == e ? at[v][1] : at[v][0];
      if (at[v][0] == e && at[v][1] == e) break;
      v = g.ends(nxt)[0] == v ? g.ends(nxt)[1] : g.ends(nxt)[0];
      e = nxt;
    }
    out.push_back(std::move(cyc));
  }
  return out;
}
}  // namespace detail

inline ChromaticReport edge_chromatic(const Graph& g) {
  if (g.num_loops() > 0) throw PreconditionError("edge coloring needs a graph without loops");
  int maxval = 0;
  for (int v = 0; v < g.num_vertices(); ++v) maxval = std::max(maxval, g.valence(v));
  ChromaticReport rep;
  for (int c = maxval;; ++c) {
    std::vector<int> col(g.num_edges(), -1);
    if (detail::color_edges(g, c, col, 0)) {
      rep.chromatic_index = c;
      rep.coloring = col;
      break;
    }
  }
  if (rep.chromatic_index == 3 && g.is_trivalent()) {
    std::vector<int> two;
    for (int e = 0; e < g.num_edges(); ++e)
      if (rep.coloring[e] != 2) two.push_back(e);
    rep.even_cycle_cover = detail::edge_cycles(g, two);
  }
  return rep;
}

// Exists a set of disjoint even cycles covering every vertex?  Searched
// through perfect matchings, independently of any coloring.
inline bool has_even_cycle_cover(const Graph& g) {
  if (g.num_loops() > 0 || !g.is_trivalent() || !g.is_closed()) return false;
  const int ne = g.num_edges();
  std::vector<char> in(ne, 0);
  std::vector<char> covered(g.num_vertices(), 0);
  bool found = false;
  auto rec = [&](auto&& self, int v) -> void {
    if (found) return;
    while (v < g.num_vertices() && covered[v]) ++v;
    if (v == g.num_vertices()) {
      std::vector<int> rest;
      for (int e = 0; e < ne; ++e)
        if (!in[e]) rest.push_back(e);
      bool even = true;
      for (const auto& cyc : detail::edge_cycles(g, rest))
        if (cyc.size() % 2) even = false;
      found = even;
      return;
    }
    for (Dart d : g.star(v)) {
      int e = edge_of(d);
      int u = g.vertex_of(mate(d));
      if (covered[u]) continue;
      in[e] = covered[u] = covered[v] = 1;
      self(self, v + 1);
      in[e] = covered[u] = covered[v] = 0;
    }
  };
  rec(rec, 0);
  return found;
}

// ---------------------------------------------------------------------------
// large limit curve

// Minimum number of edges whose removal disconnects the graph.
inline int edge_connectivity(const Graph& g) {
  std::vector<int> candidates;
  for (int e = 0; e < g.num_edges(); ++e)
    if (!g.is_loop(e) && !g.is_parabolic(e)) candidates.push_back(e);
  const int m = static_cast<int>(candidates.size());
  for (int size = 1; size <= m; ++size) {
    std::vector<char> pick(m, 0);
    std::fill(pick.begin(), pick.begin() + size, 1);
    do {
      std::vector<std::array<int, 2>> ends;
      for (int i = 0; i < m; ++i)
        if (!pick[i]) ends.push_back(g.ends(candidates[i]));
      if (!Graph(g.num_vertices(), ends).is_connected()) return size;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return std::numeric_limits<int>::max();
}

struct LLCurve {
  int components = 0;
  int nodes = 0;
  std::vector<std::vector<Dart>> marked_points;  // per component
  std::vector<DartPair> node_branches;           // per node
  std::vector<int> canonical_multidegree;
  int arithmetic_genus = 0;
  int thickness = 0;
  bool base_point_free = false;
  bool very_ample = false;
};

inline LLCurve ll_curve(const Graph& g) {
  if (!g.is_closed()) throw PreconditionError("large limit curve needs a closed graph");
  genus(g);
  LLCurve c;
  c.components = g.num_vertices();
  c.nodes = g.num_edges();
  for (int v = 0; v < g.num_vertices(); ++v) {
    c.marked_points.push_back(g.star(v));
    c.canonical_multidegree.push_back(g.valence(v) - 2);
  }
  for (int e = 0; e < g.num_edges(); ++e) c.node_branches.push_back({2 * e, 2 * e + 1});
  c.arithmetic_genus = c.nodes - c.components + 1;
  c.thickness = edge_connectivity(g);
  c.base_point_free = c.thickness >= 2;
  c.very_ample = c.thickness >= 3;
  return c;
}

}  // namespace verlinde
