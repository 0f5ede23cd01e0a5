#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "verlinde/verlinde.hpp"
#include "verlinde/weights.hpp"

using namespace verlinde;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// The vertex conditions stated on rational weights, checked literally.
bool literal_admissible(const Graph& g, int k, const std::vector<int>& n) {
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& s = g.star(v);
    Rational w1(n[edge_of(s[0])], 2 * k), w2(n[edge_of(s[1])], 2 * k), w3(n[edge_of(s[2])], 2 * k);
    Rational sum = w1 + w2 + w3;
    if (denominator(Rational(sum * k)) != 1) return false;
    if (sum > 1) return false;
    Rational diff = w1 > w2 ? w1 - w2 : w2 - w1;
    if (w3 < diff) return false;
    if (w3 > w1 + w2 || w3 > 2 - w1 - w2) return false;
  }
  return true;
}

std::vector<std::vector<int>> brute_weights(const Graph& g, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> n(g.num_edges(), 0);
  while (true) {
    if (literal_admissible(g, k, n)) out.push_back(n);
    int i = g.num_edges() - 1;
    while (i >= 0 && ++n[i] > k) n[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

TEST(Admissible, Examples) {
  auto theta = share(theta_graph());
  auto w = weight_from_values(theta, 1, {Rational(1, 2), Rational(1, 2), Rational(0)});
  EXPECT_TRUE(is_admissible(w).admissible);
  auto bad = weight_from_values(theta, 1, {Rational(1, 2), Rational(0), Rational(0)});
  auto rep = is_admissible(bad);
  EXPECT_FALSE(rep.admissible);
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_EQ(rep.violations[0].condition, VertexCondition::Parity);
  auto db = share(dumbbell_graph());
  auto w2 = weight_from_values(db, 2, {Rational(1, 2), Rational(1, 2), Rational(0)});
  auto r2 = is_admissible(w2);
  EXPECT_FALSE(r2.admissible);
  bool sum_violation = false;
  for (const auto& v : r2.violations) sum_violation |= v.condition == VertexCondition::Sum;
  EXPECT_TRUE(sum_violation);
  EXPECT_THROW(weight_from_values(theta, 2, {Rational(1, 3), Rational(0), Rational(0)}), DomainError);
  EXPECT_THROW(is_admissible(theta_graph(), 2, {3, 0, 0}), DomainError);
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_labels(theta_graph(), 1).size(), 4u);
  EXPECT_EQ(enumerate_labels(theta_graph(), 2).size(), 10u);
  EXPECT_EQ(enumerate_labels(dumbbell_graph(), 2).size(), 10u);
}

TEST(Enumerate, MatchesLiteralBruteForce) {
  for (int g = 2; g <= 3; ++g)
    for (const auto& gr : enumerate_trivalent(g))
      for (int k = 1; k <= (g == 2 ? 6 : 3); ++k) {
        auto fast = enumerate_labels(gr, k);
        EXPECT_EQ(fast, brute_weights(gr, k));
        EXPECT_TRUE(std::is_sorted(fast.begin(), fast.end()));
      }
}

TEST(Enumerate, BoundaryLabels) {
  // One-holed torus: a loop with a leg; label j on the leg forces j even.
  Graph g = Graph::with_legs(1, {{0, 0}}, {0});
  for (int k = 1; k <= 5; ++k)
    for (int j = 0; j <= k; ++j) {
      std::vector<int> b{j};
      auto ws = enumerate_labels(g, k, &b);
      int expected = j % 2 ? 0 : k - j + 1;
      EXPECT_EQ(static_cast<int>(ws.size()), expected);
      EXPECT_EQ(BigInt(ws.size()), FusionRing(k).rk(1, {j}));
    }
  std::vector<int> wrong{0, 0};
  EXPECT_THROW(enumerate_labels(g, 2, &wrong), DomainError);
}

TEST(Enumerate, ThreadedCountMatches) {
  for (const auto& gr : enumerate_trivalent(3))
    EXPECT_EQ(count_weights(gr, 5, nullptr, 3), count_weights(gr, 5));
}

TEST(Enumerate, LevelMonotonicity) {
  for (const auto& gr : enumerate_trivalent(3))
    for (int k = 1; k <= 4; ++k)
      for (const auto& l : enumerate_labels(gr, k))
        for (int kk = k; kk <= 6; ++kk) EXPECT_TRUE(is_admissible(gr, kk, l).admissible);
}

TEST(CountCheck, GraphIndependence) {
  for (int g = 2; g <= 3; ++g)
    for (int k = 1; k <= 8; ++k) {
      auto rep = verlinde_count_check(g, k);
      EXPECT_EQ(rep.counts.size(), g == 2 ? 2u : 5u);
    }
  EXPECT_EQ(verlinde_count_check(2, 1).verlinde_number, 4);
  EXPECT_EQ(verlinde_count_check(2, 2).verlinde_number, 10);
  EXPECT_EQ(verlinde_count_check(3, 1).verlinde_number, 8);
  for (int k = 1; k <= 12; ++k) EXPECT_EQ(count_weights(theta_graph(), k), count_weights(dumbbell_graph(), k));
}

TEST(U1, Counts) {
  EXPECT_EQ(u1_networks(theta_graph(), 2).networks.size(), 4u);
  EXPECT_EQ(u1_networks(dumbbell_graph(), 3).networks.size(), 9u);
  EXPECT_EQ(u1_networks(theta_graph(), 1).networks.size(), 1u);
  for (int g = 2; g <= 3; ++g)
    for (const auto& gr : enumerate_trivalent(g))
      for (int k = 1; k <= 12; ++k) {
        auto rep = u1_networks(gr, k, k <= 6);
        long long expect = 1;
        for (int i = 0; i < g; ++i) expect *= k;
        EXPECT_EQ(rep.count, expect);
        if (k <= 6) {
          EXPECT_EQ(static_cast<long long>(rep.networks.size()), expect);
          std::set<std::vector<int>> distinct, coords;
          for (const auto& x : rep.networks) {
            EXPECT_TRUE(is_u1_flow(gr, k, x));
            distinct.insert(x);
            coords.insert(u1_coordinates(rep, x));
          }
          EXPECT_EQ(static_cast<long long>(distinct.size()), expect);
          EXPECT_EQ(static_cast<long long>(coords.size()), expect);
        }
      }
}

TEST(U1, KernelOracle) {
  for (const auto& gr : enumerate_trivalent(2))
    for (int k = 1; k <= 5; ++k) {
      long long kernel = 0;
      std::vector<int> x(gr.num_edges(), 0);
      while (true) {
        kernel += is_u1_flow(gr, k, x);
        int i = gr.num_edges() - 1;
        while (i >= 0 && ++x[i] == k) x[i--] = 0;
        if (i < 0) break;
      }
      EXPECT_EQ(kernel, u1_networks(gr, k).count);
    }
}

TEST(U1, CycleBasisIsIntegralFlows) {
  for (const auto& gr : enumerate_trivalent(3)) {
    auto rep = u1_networks(gr, 2, false);
    EXPECT_EQ(rep.cycle_basis.size(), 3u);
    for (const auto& c : rep.cycle_basis)
      for (int k = 2; k <= 7; ++k) EXPECT_TRUE(is_u1_flow(gr, k, c));
  }
}

TEST(Level1, EvenSubgraphs) {
  auto t = level1_networks(theta_graph());
  std::vector<std::vector<int>> expected{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(t, expected);
  auto d = level1_networks(dumbbell_graph());
  EXPECT_EQ(d.size(), 4u);
  for (const auto& l : d) EXPECT_EQ(l[1], 0);
  for (const auto& gr : enumerate_trivalent(3)) EXPECT_EQ(level1_networks(gr).size(), 8u);
  for (const auto& gr : enumerate_trivalent(4)) EXPECT_EQ(level1_networks(gr).size(), 16u);
}

TEST(Polytope, GenusTwoVolumes) {
  auto vt = polytope_volume(moment_polytope(theta_graph()));
  EXPECT_TRUE(vt.exact);
  EXPECT_EQ(vt.value, Rational(1, 24));
  EXPECT_EQ(vt.vertices, 4);
  auto vd = polytope_volume(moment_polytope(dumbbell_graph()));
  EXPECT_EQ(vd.value, Rational(1, 24));
}

TEST(Polytope, GenusThreeVolumeMatchesCountAsymptotics) {
  // Leading coefficient of V(3,k) from exact counts, divided by the
  // parity-lattice density 2^3.
  FusionRing probe(1);
  std::vector<BigInt> N;
  for (int k = 1; k <= 7; ++k) N.push_back(FusionRing(k).rk(3));
  Rational diff = 0, binom = 1;
  for (int i = 0; i <= 6; ++i) {
    Rational term = binom * Rational(N[i]);
    diff += (6 - i) % 2 ? -term : term;
    binom = binom * (6 - i) / (i + 1);
  }
  Rational leading = diff / 720;
  EXPECT_EQ(leading, Rational(1, 180));
  for (const auto& gr : enumerate_trivalent(3)) {
    auto v = polytope_volume(moment_polytope(gr));
    EXPECT_EQ(v.value * 8, leading);
  }
}

TEST(Polytope, MonteCarloBracketsExactValue) {
  VolumeOptions opt;
  opt.exact_max_dim = 0;
  opt.samples = 400000;
  opt.seed = 3;
  auto mc = polytope_volume(moment_polytope(theta_graph()), opt);
  EXPECT_FALSE(mc.exact);
  EXPECT_NEAR(mc.estimate, 1.0 / 24, mc.half_width);
  auto g4 = polytope_volume(moment_polytope(multi_theta_graph(4)), VolumeOptions{6, 400000, 0.99, 1, 0.5});
  EXPECT_FALSE(g4.exact);
  EXPECT_GT(g4.estimate, 0);
}

TEST(Polytope, LatticePointsEqualWeights) {
  for (int g = 2; g <= 3; ++g)
    for (const auto& gr : enumerate_trivalent(g))
      for (int k = 1; k <= (g == 2 ? 6 : 3); ++k)
        EXPECT_EQ(lattice_points(moment_polytope(gr), k), enumerate_labels(gr, k));
}

TEST(Polytope, ZeroWeightInside) {
  for (const auto& gr : enumerate_trivalent(3)) {
    auto P = moment_polytope(gr);
    EXPECT_TRUE(P.contains(std::vector<Rational>(P.dim, Rational(0))));
  }
}

TEST(Asymptotics, GenusTwo) {
  auto r = bs_asymptotics(2, 1, 10);
  EXPECT_TRUE(r.exact_fit);
  EXPECT_TRUE(r.polynomial_check);
  EXPECT_EQ(r.leading_coefficient, Rational(1, 6));
  EXPECT_EQ(r.w_volume, Rational(1, 24));
  EXPECT_EQ(r.lattice_density, Rational(4));
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.normalization_mismatch);
  EXPECT_EQ(r.c_volume, Rational(1, 3));
}

TEST(Asymptotics, GenusThreeAndShortRange) {
  auto r = bs_asymptotics(3, 1, 8);
  EXPECT_EQ(r.leading_coefficient, Rational(1, 180));
  EXPECT_TRUE(r.consistent);
  auto s = bs_asymptotics(2, 5, 6);
  EXPECT_FALSE(s.exact_fit);
  EXPECT_FALSE(s.warnings.empty());
  EXPECT_THROW(bs_asymptotics(4, 1, 3), DomainError);
}

TEST(Fiber, Vacuum) {
  auto theta = share(theta_graph());
  WeightFunction w{theta, 2, {0, 0, 0}};
  auto r = fiber_stabilizers(w);
  for (auto s : r.edge) EXPECT_EQ(s, Stabilizer::SU2);
  for (auto s : r.vertex) EXPECT_EQ(s, Stabilizer::SU2);
  EXPECT_EQ(r.p, 1);
  EXPECT_EQ(r.t, 0);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.h1, "Z2");
}

TEST(Fiber, BoundaryStratum) {
  auto theta = share(theta_graph());
  auto w = weight_from_values(theta, 2, {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
  auto r = fiber_stabilizers(w);
  EXPECT_EQ(r.edge, (std::vector<Stabilizer>{Stabilizer::SU2, Stabilizer::U1, Stabilizer::U1}));
  EXPECT_EQ(r.vertex, (std::vector<Stabilizer>{Stabilizer::U1, Stabilizer::U1}));
  EXPECT_TRUE(r.consistent);
  auto bad = weight_from_values(theta, 2, {Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  EXPECT_THROW(fiber_stabilizers(bad), AdmissibilityError);
}

TEST(Fiber, InteriorPointsAreTori) {
  for (const auto& gr : enumerate_trivalent(3)) {
    auto sg = share(gr);
    for (const auto& l : enumerate_labels(gr, 6)) {
      auto r = fiber_stabilizers({sg, 6, l});
      EXPECT_TRUE(r.consistent);
      bool interior = std::all_of(r.vertex.begin(), r.vertex.end(), [](Stabilizer s) { return s == Stabilizer::Z2; });
      if (interior) {
        EXPECT_EQ(r.t, 6);
        EXPECT_EQ(r.p, 0);
        EXPECT_EQ(r.s, 0);
      }
    }
  }
}
