#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "verlinde/graph.hpp"
#include "verlinde/graph_json.hpp"

using namespace verlinde;

namespace {

// Isomorphism by trying every vertex relabelling.
bool brute_isomorphic(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  const int n = a.num_vertices();
  auto mat = [n](const Graph& g) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n + 1, 0));
    for (const auto& p : g.edge_ends()) {
      if (p[1] == kFreeEnd) {
        ++m[p[0]][n];
      } else {
        ++m[p[0]][p[1]];
        if (p[0] != p[1]) ++m[p[1]][p[0]];
      }
    }
    return m;
  };
  auto ma = mat(a), mb = mat(b);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (ma[i][n] != mb[p[i]][n]) ok = false;
      for (int j = 0; j < n && ok; ++j)
        if (ma[i][j] != mb[p[i]][p[j]]) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// Classes of connected closed trivalent graphs built from every perfect
// matching of the 6g-6 darts grouped three per vertex.
std::vector<Graph> brute_force_classes(int g) {
  const int nv = 2 * g - 2, nd = 3 * nv;
  std::vector<Graph> reps;
  std::vector<int> partner(nd, -1);
  auto rec = [&](auto&& self) -> void {
    int d = 0;
    while (d < nd && partner[d] >= 0) ++d;
    if (d == nd) {
      std::vector<std::array<int, 2>> ends;
      for (int x = 0; x < nd; ++x)
        if (x < partner[x]) ends.push_back({x / 3, partner[x] / 3});
      Graph gr(nv, ends);
      if (!gr.is_connected()) return;
      for (const auto& r : reps)
        if (brute_isomorphic(r, gr)) return;
      reps.push_back(gr);
      return;
    }
    for (int y = d + 1; y < nd; ++y) {
      if (partner[y] >= 0) continue;
      partner[d] = y;
      partner[y] = d;
      self(self);
      partner[d] = partner[y] = -1;
    }
  };
  rec(rec);
  return reps;
}

RibbonStructure theta_ribbon(bool planar) {
  Graph t = theta_graph();
  RibbonStructure r = default_ribbon(t);
  if (planar) std::reverse(r.cyclic_order[1].begin(), r.cyclic_order[1].end());
  return r;
}

// Cycles up to rotation and reversal (reversal also swaps each dart).
std::vector<std::vector<Dart>> normalized_cycles(std::vector<std::vector<Dart>> cs) {
  for (auto& c : cs) {
    std::vector<Dart> r;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r.push_back(mate(*it));
    std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
    std::rotate(r.begin(), std::min_element(r.begin(), r.end()), r.end());
    c = std::min(c, r);
  }
  std::sort(cs.begin(), cs.end());
  return cs;
}

}  // namespace

TEST(Genus, StandardGraphs) {
  EXPECT_EQ(genus(theta_graph()), 2);
  EXPECT_EQ(genus(dumbbell_graph()), 2);
  EXPECT_EQ(genus(k4_graph()), 3);
  for (int g = 2; g <= 6; ++g) {
    EXPECT_EQ(genus(multi_theta_graph(g)), g);
    EXPECT_EQ(genus(chain_graph(g)), g);
    EXPECT_EQ(multi_theta_graph(g).num_vertices(), 2 * g - 2);
  }
  EXPECT_TRUE(isomorphic(multi_theta_graph(2), theta_graph()));
  EXPECT_TRUE(isomorphic(chain_graph(2), dumbbell_graph()));
}

TEST(Genus, MalformedGraphs) {
  EXPECT_THROW(genus(Graph(2, {{0, 1}, {0, 1}})), StructuralError);
  EXPECT_THROW(Graph(2, {{0, 2}}), StructuralError);
  EXPECT_THROW(Graph(2, {{kFreeEnd, 1}}), StructuralError);
}

TEST(Genus, ParabolicGraphsUseBetti) {
  // One vertex with a loop and a leg: genus 1 with one marked point.
  Graph g = Graph::with_legs(1, {{0, 0}}, {0});
  EXPECT_EQ(genus(g), 1);
  // Theta with a subdivided edge carrying a leg: still genus 2.
  Graph h = Graph::with_legs(4, {{0, 1}, {0, 1}, {0, 2}, {2, 3}, {3, 1}}, {2, 3});
  EXPECT_EQ(genus(h), 2);
}

TEST(Enumerate, ClassCounts) {
  EXPECT_EQ(enumerate_trivalent(2).size(), 2u);
  EXPECT_EQ(enumerate_trivalent(3).size(), 5u);
  EXPECT_EQ(enumerate_trivalent(4).size(), 17u);
  EXPECT_THROW(enumerate_trivalent(1), DomainError);
  EXPECT_THROW(enumerate_trivalent(6), ResourceLimit);
}

TEST(Enumerate, GenusFiveCount) { EXPECT_EQ(enumerate_trivalent(5).size(), 71u); }

TEST(Enumerate, MatchesDartMatchingOracle) {
  for (int g : {2, 3}) {
    auto fast = enumerate_trivalent(g);
    auto slow = brute_force_classes(g);
    ASSERT_EQ(fast.size(), slow.size());
    for (const auto& s : slow) {
      int hits = 0;
      for (const auto& f : fast) hits += brute_isomorphic(s, f);
      EXPECT_EQ(hits, 1);
    }
  }
}

TEST(Enumerate, EulerRelations) {
  for (int g = 2; g <= 4; ++g) {
    for (const auto& gr : enumerate_trivalent(g)) {
      EXPECT_EQ(genus(gr), g);
      int loops = gr.num_loops();
      int flags = 0;
      for (int v = 0; v < gr.num_vertices(); ++v) flags += gr.valence(v) - 0;
      // flags counted with loops once per loop, as in 2|E| - |L| = 3|V| - |L|
      EXPECT_EQ(2 * gr.num_edges() - loops, flags - loops);
      EXPECT_EQ(flags, 3 * gr.num_vertices());
    }
  }
}

TEST(CanonicalForm, InvariantUnderRelabelling) {
  std::mt19937 rng(7);
  for (const auto& gr : enumerate_trivalent(4)) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> p(gr.num_vertices());
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      auto ends = gr.edge_ends();
      for (auto& e : ends) {
        e = {p[e[0]], p[e[1]]};
        if (rng() % 2) std::swap(e[0], e[1]);
      }
      std::shuffle(ends.begin(), ends.end(), rng);
      Graph h(gr.num_vertices(), ends);
      EXPECT_EQ(canonical_form(h).code, canonical_form(gr).code);
      EXPECT_EQ(canonical_graph(h), canonical_graph(gr));
    }
  }
}

TEST(Moves, ContractTheta) {
  auto c = contract_edge(theta_graph(), 0);
  EXPECT_EQ(c.graph.num_vertices(), 1);
  EXPECT_EQ(c.graph.num_edges(), 2);
  EXPECT_EQ(c.graph.valence(0), 4);
  EXPECT_EQ(c.graph.num_loops(), 2);
}

TEST(Moves, ContractDumbbellBridge) {
  auto c = contract_edge(dumbbell_graph(), 1);
  EXPECT_EQ(c.graph.num_vertices(), 1);
  EXPECT_EQ(c.graph.num_loops(), 2);
  EXPECT_THROW(contract_edge(dumbbell_graph(), 0), InvalidMove);
}

TEST(Moves, ContractThenExpandIsInverse) {
  for (int g = 2; g <= 3; ++g) {
    for (const auto& gr : enumerate_trivalent(g)) {
      for (int e = 0; e < gr.num_edges(); ++e) {
        if (gr.is_loop(e)) continue;
        auto c = contract_edge(gr, e);
        ASSERT_EQ(c.from_first.size(), 2u);
        Graph back = expand_vertex(c.graph, c.merged_vertex, {c.from_first[0], c.from_first[1]},
                                   {c.from_second[0], c.from_second[1]});
        EXPECT_TRUE(brute_isomorphic(back, gr));
      }
    }
  }
}

TEST(Moves, ExpandRejectsBadInput) {
  Graph t = theta_graph();
  EXPECT_THROW(expand_vertex(t, 0, {0, 2}, {4, 1}), InvalidMove);
  auto c = contract_edge(t, 0);
  const auto& s = c.graph.star(0);
  EXPECT_THROW(expand_vertex(c.graph, 0, {s[0], s[0]}, {s[2], s[3]}), InvalidMove);
  EXPECT_NO_THROW(expand_vertex(c.graph, 0, {s[0], s[1]}, {s[2], s[3]}));
}

TEST(Moves, ElementaryTransformationsOfGenusTwo) {
  Graph theta = theta_graph(), dumbbell = dumbbell_graph();
  for (int e = 0; e < 3; ++e) {
    auto t = elementary_transformations(theta, e);
    EXPECT_FALSE(t.loop_edge);
    // One partition separates the two remaining parallel edges into loops,
    // the other reproduces the theta graph.
    EXPECT_TRUE(brute_isomorphic(t.graphs[0], dumbbell));
    EXPECT_TRUE(brute_isomorphic(t.graphs[1], theta));
  }
  auto b = elementary_transformations(dumbbell, 1);
  EXPECT_TRUE(brute_isomorphic(b.graphs[0], theta));
  EXPECT_TRUE(brute_isomorphic(b.graphs[1], theta));
  auto l = elementary_transformations(dumbbell, 0);
  EXPECT_TRUE(l.loop_edge);
  EXPECT_EQ(l.graphs[0], dumbbell);
  EXPECT_EQ(l.graphs[1], dumbbell);
}

TEST(Moves, OutputsAreExpansionsOfTheContraction) {
  for (const auto& gr : enumerate_trivalent(3)) {
    for (int e = 0; e < gr.num_edges(); ++e) {
      if (gr.is_loop(e)) continue;
      auto t = elementary_transformations(gr, e);
      auto c = contract_edge(gr, e);
      auto cf0 = canonical_form(contract_edge(t.graphs[0], e).graph).code;
      auto cf1 = canonical_form(contract_edge(t.graphs[1], e).graph).code;
      EXPECT_EQ(cf0, canonical_form(c.graph).code);
      EXPECT_EQ(cf1, canonical_form(c.graph).code);
      EXPECT_EQ(genus(t.graphs[0]), 3);
      EXPECT_EQ(genus(t.graphs[1]), 3);
    }
  }
}

TEST(Moves, MoveGraphIsConnected) {
  for (int g = 2; g <= 4; ++g) {
    auto all = enumerate_trivalent(g);
    auto reached = move_closure(all.front());
    EXPECT_EQ(reached.size(), all.size()) << "genus " << g;
  }
}

TEST(Faces, ThetaPlanarAndTwisted) {
  Graph t = theta_graph();
  auto planar = trace_faces(t, theta_ribbon(true));
  EXPECT_EQ(planar.faces.size(), 3u);
  EXPECT_EQ(planar.surface_genus, 0);
  EXPECT_TRUE(planar.planar);
  auto twisted = trace_faces(t, theta_ribbon(false));
  EXPECT_EQ(twisted.faces.size(), 1u);
  EXPECT_EQ(twisted.surface_genus, 1);
}

TEST(Faces, DumbbellPlanar) {
  auto rep = trace_faces(dumbbell_graph(), default_ribbon(dumbbell_graph()));
  EXPECT_EQ(rep.surface_genus, 0);
  EXPECT_EQ(rep.faces.size(), 3u);
}

TEST(Faces, TotalDegreeAndRelabellingInvariance) {
  std::mt19937 rng(3);
  for (const auto& gr : enumerate_trivalent(3)) {
    for (int trial = 0; trial < 4; ++trial) {
      RibbonStructure r = default_ribbon(gr);
      for (auto& c : r.cyclic_order)
        if (rng() % 2) std::reverse(c.begin(), c.end());
      auto rep = trace_faces(gr, r);
      std::size_t total = 0;
      for (const auto& f : rep.faces) total += f.size();
      EXPECT_EQ(total, static_cast<std::size_t>(2 * gr.num_edges()));
      // Relabel edges and flip orientations, transporting the ribbon.
      std::vector<int> p(gr.num_edges());
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      std::vector<int> flip(gr.num_edges());
      for (auto& f : flip) f = rng() % 2;
      std::vector<std::array<int, 2>> ends(gr.num_edges());
      for (int e = 0; e < gr.num_edges(); ++e) {
        auto en = gr.ends(e);
        if (flip[e]) std::swap(en[0], en[1]);
        ends[p[e]] = en;
      }
      Graph h(gr.num_vertices(), ends);
      RibbonStructure rh;
      for (const auto& c : r.cyclic_order) {
        std::vector<Dart> cc;
        for (Dart d : c) cc.push_back(2 * p[edge_of(d)] + ((d & 1) ^ flip[edge_of(d)]));
        rh.cyclic_order.push_back(cc);
      }
      EXPECT_EQ(trace_faces(h, rh).surface_genus, rep.surface_genus);
    }
  }
}

TEST(Connection, RibbonGeodesicsAreFaces) {
  Graph t = theta_graph();
  auto r = theta_ribbon(true);
  auto conn = ribbon_connection(t, r);
  EXPECT_TRUE(conn.is_adapted());
  auto geos = geodesics(conn);
  ASSERT_EQ(geos.size(), 3u);
  for (const auto& g : geos) EXPECT_TRUE(g.flat);
  std::vector<std::vector<Dart>> gd;
  for (const auto& g : geos) gd.push_back(g.darts);
  EXPECT_EQ(normalized_cycles(gd), normalized_cycles(trace_faces(t, r).faces));
}

TEST(Connection, GeodesicsMatchFacesUpToReversal) {
  for (int g = 2; g <= 3; ++g) {
    for (const auto& gr : enumerate_trivalent(g)) {
      auto r = default_ribbon(gr);
      auto conn = ribbon_connection(gr, r);
      auto geos = geodesics(conn);
      auto faces = trace_faces(gr, r).faces;
      EXPECT_EQ(geos.size(), faces.size());
      for (const auto& geo : geos) {
        EXPECT_EQ(geo.flat, geo.darts.size() % 2 == 0);
      }
    }
  }
}

TEST(Connection, GaugeInvariantMonodromyClasses) {
  std::mt19937 rng(11);
  for (const auto& gr : enumerate_trivalent(3)) {
    auto r = default_ribbon(gr);
    auto conn = ribbon_connection(gr, r);
    auto faces = trace_faces(gr, r).faces;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Permutation> gauge(gr.num_vertices(), Permutation{0, 1, 2});
      for (auto& p : gauge) std::shuffle(p.begin(), p.end(), rng);
      auto moved = gauge_transform(conn, gauge);
      for (const auto& f : faces)
        EXPECT_EQ(cycle_type(monodromy(moved, f)), cycle_type(monodromy(conn, f)));
    }
  }
}

TEST(Connection, RejectsInconsistentTransport) {
  Graph t = theta_graph();
  std::vector<Permutation> id(t.num_darts(), Permutation{0, 1, 2});
  EXPECT_NO_THROW(GraphConnection(t, id));
  id[0] = {1, 0, 2};
  EXPECT_THROW(GraphConnection(t, id), StructuralError);
}

TEST(Eulerian, Theta) { EXPECT_EQ(eulerian_invariant(theta_graph()).invariant, 1); }

TEST(Eulerian, BoundsParityAndFaceOracle) {
  for (int g = 2; g <= 4; ++g) {
    for (const auto& gr : enumerate_trivalent(g)) {
      auto rep = eulerian_invariant(gr);
      EXPECT_GE(rep.invariant, 1);
      EXPECT_LE(rep.invariant, g + 1);
      EXPECT_EQ(rep.invariant % 2, (g - 1) % 2);
      std::size_t used = 0;
      for (const auto& c : rep.witness) used += c.size();
      EXPECT_EQ(used, static_cast<std::size_t>(gr.num_darts()));
      if (g <= 3) {
        // Transitions at trivalent vertices are cyclic orders, so the
        // minimum over ribbon structures of the face count agrees.
        int best = 1 << 20;
        const int nv = gr.num_vertices();
        for (int mask = 0; mask < (1 << nv); ++mask) {
          auto r = default_ribbon(gr);
          for (int v = 0; v < nv; ++v)
            if (mask >> v & 1) std::reverse(r.cyclic_order[v].begin(), r.cyclic_order[v].end());
          best = std::min(best, static_cast<int>(trace_faces(gr, r).faces.size()));
        }
        EXPECT_EQ(rep.invariant, best);
      }
    }
  }
}

TEST(Chromatic, ThetaAndK4) {
  auto t = edge_chromatic(theta_graph());
  EXPECT_EQ(t.chromatic_index, 3);
  auto k = edge_chromatic(k4_graph());
  EXPECT_EQ(k.chromatic_index, 3);
  EXPECT_THROW(edge_chromatic(dumbbell_graph()), PreconditionError);
}

TEST(Chromatic, EvenCycleCoverEquivalence) {
  int seen_four = 0;
  for (int g = 2; g <= 4; ++g) {
    for (const auto& gr : enumerate_trivalent(g)) {
      if (gr.num_loops() > 0) continue;
      auto rep = edge_chromatic(gr);
      EXPECT_EQ(rep.chromatic_index == 3, has_even_cycle_cover(gr));
      if (rep.chromatic_index == 4) ++seen_four;
      if (rep.chromatic_index == 3) {
        std::vector<int> hit(gr.num_vertices(), 0);
        for (const auto& cyc : rep.even_cycle_cover) {
          EXPECT_EQ(cyc.size() % 2, 0u);
          for (int e : cyc) {
            ++hit[gr.ends(e)[0]];
            ++hit[gr.ends(e)[1]];
          }
        }
        for (int h : hit) EXPECT_EQ(h, 2);
      }
    }
  }
  EXPECT_GT(seen_four, 0);
}

TEST(LLCurve, ThetaAndDumbbell) {
  auto t = ll_curve(theta_graph());
  EXPECT_EQ(t.components, 2);
  EXPECT_EQ(t.nodes, 3);
  EXPECT_EQ(t.canonical_multidegree, (std::vector<int>{1, 1}));
  EXPECT_EQ(t.thickness, 3);
  EXPECT_TRUE(t.very_ample);
  auto d = ll_curve(dumbbell_graph());
  EXPECT_EQ(d.thickness, 1);
  EXPECT_FALSE(d.base_point_free);
  EXPECT_FALSE(d.very_ample);
}

TEST(LLCurve, ArithmeticGenusMatches) {
  for (int g = 2; g <= 4; ++g)
    for (const auto& gr : enumerate_trivalent(g)) {
      auto c = ll_curve(gr);
      EXPECT_EQ(c.arithmetic_genus, g);
      EXPECT_LE(c.thickness, 3);
      EXPECT_EQ(std::accumulate(c.canonical_multidegree.begin(), c.canonical_multidegree.end(), 0), 2 * g - 2);
    }
}

TEST(GraphJson, RoundTripAndRibbon) {
  auto j = nlohmann::json::parse(
      R"({"vertices":2,"edges":[[0,1],[0,1],[0,1]],"ribbon":{"0":[0,1,2],"1":[0,2,1]}})");
  auto doc = graph_from_json(j);
  EXPECT_EQ(doc.graph, theta_graph());
  ASSERT_TRUE(doc.ribbon.has_value());
  EXPECT_EQ(trace_faces(doc.graph, *doc.ribbon).surface_genus, 0);
  auto back = graph_from_json(graph_to_json(doc.graph, &*doc.ribbon));
  EXPECT_EQ(back.graph, doc.graph);
  EXPECT_EQ(back.ribbon->cyclic_order, doc.ribbon->cyclic_order);
}

TEST(GraphJson, LoopsAndLegs) {
  auto j = nlohmann::json::parse(R"({"vertices":1,"edges":[[0,0]],"parabolic":[0],"ribbon":{"0":[0,1,0]}})");
  auto doc = graph_from_json(j);
  EXPECT_EQ(doc.graph.num_parabolic(), 1);
  EXPECT_EQ(doc.ribbon->cyclic_order[0], (std::vector<Dart>{0, 2, 1}));
  EXPECT_THROW(graph_from_json(nlohmann::json::parse(R"({"vertices":1})")), StructuralError);
}

TEST(GraphJson, CanonicalSerializationAgreesForIsomorphicInputs) {
  Graph a(2, {{1, 0}, {0, 0}, {1, 1}});
  EXPECT_EQ(canonical_json(a), canonical_json(dumbbell_graph()));
}
