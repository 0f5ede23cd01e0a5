#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "verlinde/error.hpp"
#include "verlinde/fusion.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/polytope.hpp"

namespace verlinde {

using Rational = boost::multiprecision::cpp_rational;

// Integer labels n_e in {0..k}; the weight is w_e = n_e / 2k and n_e is the
// twice-spin of the spin network.
struct WeightFunction {
  std::shared_ptr<const Graph> graph;
  int level = 1;
  std::vector<int> labels;

  Rational value(int e) const { return Rational(labels.at(e), 2 * level); }
};

inline WeightFunction weight_from_values(std::shared_ptr<const Graph> g, int k, const std::vector<Rational>& w) {
  if (k < 1) throw DomainError("level must be positive");
  if (static_cast<int>(w.size()) != g->num_edges()) throw DomainError("one value per edge expected");
  WeightFunction f{std::move(g), k, {}};
  for (const auto& x : w) {
    Rational n = x * 2 * k;
    if (denominator(n) != 1 || n < 0 || n > k)
      throw DomainError("weight value outside (1/2k){0..k}");
    f.labels.push_back(static_cast<int>(numerator(n)));
  }
  return f;
}

// Labels meeting at each vertex, loops counted twice, in star order.
inline std::vector<std::array<int, 3>> vertex_triples(const Graph& g) {
  std::vector<std::array<int, 3>> out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) != 3) throw StructuralError("weights need trivalent vertices");
    const auto& s = g.star(v);
    out.push_back({edge_of(s[0]), edge_of(s[1]), edge_of(s[2])});
  }
  return out;
}

enum class VertexCondition { Parity, Sum, Triangle, Level };

inline std::string to_string(VertexCondition c) {
  switch (c) {
    case VertexCondition::Parity: return "parity";
    case VertexCondition::Sum: return "sum";
    case VertexCondition::Triangle: return "triangle";
    case VertexCondition::Level: return "level";
  }
  return "?";
}

// The conditions at one vertex, in twice-spin integers:
// n1+n2+n3 even, n1+n2+n3 <= 2k, |n1-n2| <= n3 <= min(n1+n2, 4k-n1-n2).
inline std::vector<VertexCondition> vertex_violations(int k, int a, int b, int c) {
  std::vector<VertexCondition> v;
  if ((a + b + c) % 2) v.push_back(VertexCondition::Parity);
  if (a + b + c > 2 * k) v.push_back(VertexCondition::Sum);
  if (c < std::abs(a - b) || c > a + b) v.push_back(VertexCondition::Triangle);
  if (c > 4 * k - a - b) v.push_back(VertexCondition::Level);
  return v;
}

inline bool vertex_admissible(int k, int a, int b, int c) {
  return (a + b + c) % 2 == 0 && a + b + c <= 2 * k && c >= std::abs(a - b) && c <= a + b &&
         c <= 4 * k - a - b;
}

struct Violation {
  int vertex;
  VertexCondition condition;
};

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<Violation> violations;
};

inline AdmissibilityReport is_admissible(const Graph& g, int k, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != g.num_edges()) throw DomainError("one label per edge expected");
  for (int n : labels)
    if (n < 0 || n > k) throw DomainError("label outside {0..k}");
  AdmissibilityReport rep;
  auto triples = vertex_triples(g);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& t = triples[v];
    for (auto c : vertex_violations(k, labels[t[0]], labels[t[1]], labels[t[2]])) {
      rep.violations.push_back({v, c});
      rep.admissible = false;
    }
  }
  return rep;
}

inline AdmissibilityReport is_admissible(const WeightFunction& w) {
  return is_admissible(*w.graph, w.level, w.labels);
}

// ---------------------------------------------------------------------------
// enumeration

namespace detail {

struct WeightSearch {
  const Graph& g;
  int k;
  std::vector<std::array<int, 3>> triples;
  std::vector<std::vector<int>> check_after;  // vertices whose last edge is e
  std::vector<int> fixed;                     // -1 or prescribed label
  std::vector<int> labels;

  WeightSearch(const Graph& graph, int level, const std::vector<int>* boundary)
      : g(graph), k(level), triples(vertex_triples(graph)) {
    if (k < 1) throw DomainError("level must be positive");
    check_after.assign(g.num_edges(), {});
    for (int v = 0; v < g.num_vertices(); ++v) {
      const auto& t = triples[v];
      check_after[std::max({t[0], t[1], t[2]})].push_back(v);
    }
    fixed.assign(g.num_edges(), -1);
    std::vector<int> legs;
    for (int e = 0; e < g.num_edges(); ++e)
      if (g.is_parabolic(e)) legs.push_back(e);
    if (boundary) {
      if (boundary->size() != legs.size()) throw DomainError("one boundary label per parabolic edge expected");
      for (std::size_t i = 0; i < legs.size(); ++i) {
        int n = (*boundary)[i];
        if (n < 0 || n > k) throw DomainError("boundary label outside {0..k}");
        fixed[legs[i]] = n;
      }
    }
    labels.assign(g.num_edges(), 0);
  }

  bool vertices_ok(int e) const {
    for (int v : check_after[e]) {
      const auto& t = triples[v];
      if (!vertex_admissible(k, labels[t[0]], labels[t[1]], labels[t[2]])) return false;
    }
    return true;
  }

  template <class Visit>
  void run(int e, Visit&& visit) {
    if (e == g.num_edges()) {
      visit(labels);
      return;
    }
    int lo = fixed[e] >= 0 ? fixed[e] : 0;
    int hi = fixed[e] >= 0 ? fixed[e] : k;
    for (int n = lo; n <= hi; ++n) {
      labels[e] = n;
      if (vertices_ok(e)) run(e + 1, visit);
    }
  }
};

}  // namespace detail

// Admissible label vectors in lexicographic order of edge values.
inline std::vector<std::vector<int>> enumerate_labels(const Graph& g, int k,
                                                      const std::vector<int>* boundary = nullptr) {
  detail::WeightSearch s(g, k, boundary);
  std::vector<std::vector<int>> out;
  s.run(0, [&](const std::vector<int>& l) { out.push_back(l); });
  return out;
}

inline std::vector<WeightFunction> enumerate_weights(std::shared_ptr<const Graph> g, int k,
                                                     const std::vector<int>* boundary = nullptr) {
  std::vector<WeightFunction> out;
  for (auto& l : enumerate_labels(*g, k, boundary)) out.push_back({g, k, std::move(l)});
  return out;
}

// |W^k(G)|; the first edge's values are split across threads.
inline long long count_weights(const Graph& g, int k, const std::vector<int>* boundary = nullptr,
                               int threads = 1) {
  if (g.num_edges() == 0) return 1;
  detail::WeightSearch probe(g, k, boundary);
  const int lo = probe.fixed[0] >= 0 ? probe.fixed[0] : 0;
  const int hi = probe.fixed[0] >= 0 ? probe.fixed[0] : k;
  std::vector<long long> partial(hi - lo + 1, 0);
  auto work = [&](int first) {
    detail::WeightSearch s(g, k, boundary);
    s.fixed[0] = first;
    long long c = 0;
    s.run(0, [&](const std::vector<int>&) { ++c; });
    partial[first - lo] = c;
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int n = lo; n <= hi; ++n) work(n);
  } else {
    for (int base = lo; base <= hi; base += threads) {
      std::vector<std::thread> pool;
      for (int n = base; n <= std::min(hi, base + threads - 1); ++n) pool.emplace_back(work, n);
      for (auto& t : pool) t.join();
    }
  }
  long long total = 0;
  for (long long c : partial) total += c;
  return total;
}

// ---------------------------------------------------------------------------
// U(1) networks: Z_k-valued flows, edge e oriented from ends[0] to ends[1]

struct U1Report {
  int level = 1;
  long long count = 0;
  std::vector<int> cotree_edges;
  std::vector<std::vector<int>> cycle_basis;  // integer flows, one per cotree edge
  std::vector<std::vector<int>> networks;     // ordered by H1 coordinates
};

inline bool is_u1_flow(const Graph& g, int k, const std::vector<int>& x) {
  std::vector<long long> net(g.num_vertices(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    net[g.ends(e)[0]] -= x[e];
    net[g.ends(e)[1]] += x[e];
  }
  for (auto s : net)
    if (((s % k) + k) % k != 0) return false;
  return true;
}

inline U1Report u1_networks(const Graph& g, int k, bool list = true) {
  if (k < 1) throw DomainError("level must be positive");
  if (!g.is_closed() || !g.is_connected()) throw PreconditionError("U(1) networks need a closed connected graph");
  const int nv = g.num_vertices();
  // Breadth-first spanning tree from vertex 0.
  std::vector<int> parent_edge(nv, -1), order{0};
  std::vector<char> seen(nv, 0), tree(g.num_edges(), 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    for (Dart d : g.star(v)) {
      int u = g.vertex_of(mate(d));
      if (seen[u]) continue;
      seen[u] = 1;
      parent_edge[u] = edge_of(d);
      tree[edge_of(d)] = 1;
      order.push_back(u);
    }
  }
  U1Report rep;
  rep.level = k;
  for (int e = 0; e < g.num_edges(); ++e)
    if (!tree[e]) rep.cotree_edges.push_back(e);
  // Given cotree values, tree values are forced leaf first.
  auto solve = [&](const std::vector<long long>& cot, long long modulus) {
    std::vector<long long> x(g.num_edges(), 0);
    for (std::size_t i = 0; i < rep.cotree_edges.size(); ++i) x[rep.cotree_edges[i]] = cot[i];
    for (std::size_t i = order.size(); i-- > 1;) {
      int v = order[i];
      int pe = parent_edge[v];
      long long net = 0;
      for (Dart d : g.star(v)) {
        if (edge_of(d) == pe) continue;
        net += (d & 1) ? x[edge_of(d)] : -x[edge_of(d)];
      }
      // contribution of the parent edge must cancel net
      bool head = g.ends(pe)[1] == v;
      x[pe] = head ? -net : net;
      if (modulus > 0) x[pe] = ((x[pe] % modulus) + modulus) % modulus;
    }
    return x;
  };
  const int b = static_cast<int>(rep.cotree_edges.size());
  for (int i = 0; i < b; ++i) {
    std::vector<long long> cot(b, 0);
    cot[i] = 1;
    auto x = solve(cot, 0);
    rep.cycle_basis.emplace_back(x.begin(), x.end());
  }
  rep.count = 1;
  for (int i = 0; i < b; ++i) rep.count *= k;
  if (list) {
    std::vector<long long> cot(b, 0);
    while (true) {
      auto x = solve(cot, k);
      rep.networks.emplace_back(x.begin(), x.end());
      int i = b - 1;
      while (i >= 0 && ++cot[i] == k) cot[i--] = 0;
      if (i < 0) break;
    }
  }
  return rep;
}

// H1(G; Z_k) coordinates of a flow: its values on the cotree edges.
inline std::vector<int> u1_coordinates(const U1Report& rep, const std::vector<int>& flow) {
  std::vector<int> c;
  for (int e : rep.cotree_edges) c.push_back(((flow[e] % rep.level) + rep.level) % rep.level);
  return c;
}

// Level one networks are even subgraphs: labels in {0,1}.
inline std::vector<std::vector<int>> level1_networks(const Graph& g) {
  if (!g.is_closed()) throw PreconditionError("level one networks need a closed graph");
  return enumerate_labels(g, 1);
}

// ---------------------------------------------------------------------------
// fiber stabilizers

enum class Stabilizer { Z2, U1, SU2 };

inline std::string to_string(Stabilizer s) {
  switch (s) {
    case Stabilizer::Z2: return "Z2";
    case Stabilizer::U1: return "U(1)";
    case Stabilizer::SU2: return "SU(2)";
  }
  return "?";
}

struct FiberReport {
  std::vector<Stabilizer> edge;
  std::vector<Stabilizer> vertex;
  int t = 0, p = 0, s = 0;
  bool consistent = true;
  std::string h1;
  std::string product;
};

inline FiberReport fiber_stabilizers(const WeightFunction& w) {
  if (!is_admissible(w).admissible) throw AdmissibilityError("fiber_stabilizers needs an admissible weight");
  const Graph& g = *w.graph;
  const int k = w.level;
  auto central = [k](int n) { return n == 0 || n == k; };
  FiberReport r;
  int su2e = 0, u1e = 0, su2v = 0, u1v = 0;
  for (int n : w.labels) {
    r.edge.push_back(central(n) ? Stabilizer::SU2 : Stabilizer::U1);
    (central(n) ? su2e : u1e)++;
  }
  for (const auto& t : vertex_triples(g)) {
    int a = w.labels[t[0]], b = w.labels[t[1]], c = w.labels[t[2]];
    Stabilizer s;
    if (central(a) && central(b) && central(c)) {
      s = Stabilizer::SU2;
      ++su2v;
    } else if (a == b + c || b == a + c || c == a + b || a + b + c == 2 * k) {
      s = Stabilizer::U1;
      ++u1v;
    } else {
      s = Stabilizer::Z2;
    }
    r.vertex.push_back(s);
  }
  r.t = std::max(0, u1e - u1v);
  r.p = std::max(0, su2e - su2v);
  const int dim = 3 * su2e + u1e - 3 * su2v - u1v;
  const int rest = dim - r.t - 3 * r.p;
  r.consistent = rest >= 0 && rest % 2 == 0;
  r.s = r.consistent ? rest / 2 : 0;
  auto power = [](const std::string& base, int e) {
    return e == 0 ? std::string() : e == 1 ? base : base + "^" + std::to_string(e);
  };
  std::string h1;
  if (r.t) h1 = power("Z", r.t);
  if (r.p) h1 += (h1.empty() ? "" : " + ") + power("Z2", r.p);
  r.h1 = h1.empty() ? "0" : h1;
  r.product = "T^" + std::to_string(r.t) + " x [(S^3)^" + std::to_string(r.p) + " x (S^2)^" +
              std::to_string(r.s) + "] / G_w";
  return r;
}

// ---------------------------------------------------------------------------
// moment polytope in weight coordinates

inline MomentPolytope moment_polytope(const Graph& g) {
  if (!g.is_closed()) throw PreconditionError("moment polytope needs a closed graph");
  const int n = g.num_edges();
  MomentPolytope P;
  P.dim = n;
  for (const auto& t : vertex_triples(g)) {
    P.vertex_edges.push_back(t);
    for (int i = 0; i < 3; ++i) {
      std::vector<int> a(n, 0);
      a[t[i]] += 1;
      a[t[(i + 1) % 3]] -= 1;
      a[t[(i + 2) % 3]] -= 1;
      P.add({a, Rational(0)});
    }
    std::vector<int> a(n, 0);
    for (int e : t) a[e] += 1;
    P.add({a, Rational(1)});
  }
  for (int e = 0; e < n; ++e) {
    std::vector<int> lo(n, 0), hi(n, 0);
    lo[e] = -1;
    hi[e] = 1;
    P.add({lo, Rational(0)});
    P.add({hi, Rational(1, 2)});
  }
  return P;
}

// Points of the polytope on the grid (1/2k)Z^E whose vertex sums lie in
// (1/k)Z; found by scanning the box, independently of the weight search.
inline std::vector<std::vector<int>> lattice_points(const MomentPolytope& P, int k) {
  const int n = P.dim;
  std::vector<std::vector<int>> out;
  std::vector<int> x(n, 0);
  while (true) {
    bool parity = true;
    for (const auto& t : P.vertex_edges)
      if ((x[t[0]] + x[t[1]] + x[t[2]]) % 2) parity = false;
    if (parity && P.contains_scaled(x, 2 * k)) out.push_back(x);
    int i = n - 1;
    while (i >= 0 && ++x[i] > k) x[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// Index of the parity sublattice: rank over Z_2 of the vertex-sum map.
inline int parity_rank(const Graph& g) {
  std::vector<std::vector<int>> rows;
  for (const auto& t : vertex_triples(g)) {
    std::vector<int> r(g.num_edges(), 0);
    for (int e : t) r[e] ^= 1;
    rows.push_back(r);
  }
  int rank = 0;
  for (int col = 0; col < g.num_edges() && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col]) piv = i;
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != rank && rows[i][col])
        for (int c = 0; c < g.num_edges(); ++c) rows[i][c] ^= rows[rank][c];
    ++rank;
  }
  return rank;
}

struct AsymptoticsReport {
  int genus = 0;
  int degree = 0;
  std::vector<std::pair<int, long long>> counts;
  Rational leading_coefficient;
  bool exact_fit = false;
  bool polynomial_check = false;  // next difference vanishes, when available
  Rational w_volume;
  Rational lattice_density;       // admissible points per unit w-volume, over k^dim
  Rational predicted;             // density * w-volume
  Rational c_volume;              // volume in c = 2w coordinates
  bool consistent = false;
  bool normalization_mismatch = false;
  std::vector<std::string> warnings;
};

inline AsymptoticsReport bs_asymptotics(int g, int kmin, int kmax) {
  if (g != 2 && g != 3) throw DomainError("bs_asymptotics supports g = 2 or 3");
  if (kmin < 1 || kmax < kmin) throw DomainError("invalid level range");
  AsymptoticsReport r;
  r.genus = g;
  r.degree = 3 * g - 3;
  Graph gr = multi_theta_graph(g);
  for (int k = kmin; k <= kmax; ++k) r.counts.push_back({k, count_weights(gr, k)});
  const int d = r.degree;
  const int m = static_cast<int>(r.counts.size());
  auto diff = [&](int order, int start) {
    // forward difference of the given order starting at index `start`
    Rational s = 0;
    Rational binom = 1;
    for (int i = 0; i <= order; ++i) {
      Rational term = binom * Rational(r.counts[start + i].second);
      s += ((order - i) % 2 ? -term : term);
      binom = binom * (order - i) / (i + 1);
    }
    return s;
  };
  if (m >= d + 1) {
    Rational fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    r.leading_coefficient = diff(d, m - d - 1) / fact;
    r.exact_fit = true;
    if (m >= d + 2) r.polynomial_check = diff(d + 1, m - d - 2) == 0;
    else r.warnings.push_back("range too short to confirm the polynomial degree");
  } else {
    auto [k, c] = r.counts.back();
    Rational kd = 1;
    for (int i = 0; i < d; ++i) kd *= k;
    r.leading_coefficient = Rational(c) / kd;
    r.warnings.push_back("fit quality: fewer than degree+1 levels, ratio estimate only");
  }
  auto P = moment_polytope(gr);
  auto vol = polytope_volume(P);
  r.w_volume = vol.value;
  Rational density = 1;
  for (int i = 0; i < d; ++i) density *= 2;
  for (int i = 0; i < parity_rank(gr); ++i) density /= 2;
  r.lattice_density = density;
  r.predicted = density * r.w_volume;
  Rational cscale = 1;
  for (int i = 0; i < d; ++i) cscale *= 2;
  r.c_volume = cscale * r.w_volume;
  r.consistent = r.exact_fit && r.predicted == r.leading_coefficient;
  r.normalization_mismatch = r.c_volume != r.leading_coefficient;
  if (r.normalization_mismatch)
    r.warnings.push_back("leading coefficient differs from the volume in c = 2w coordinates");
  return r;
}

}  // namespace verlinde
