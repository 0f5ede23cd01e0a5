#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "verlinde/fusion.hpp"
#include "verlinde/gauge.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/modular.hpp"
#include "verlinde/newstead.hpp"
#include "verlinde/theta.hpp"
#include "verlinde/verlinde.hpp"
#include "verlinde/weights.hpp"

// Acceptance criteria as runnable checks.  `quick` shrinks the ranges for the
// CLI smoke test; the acceptance binary always runs the full ranges.

namespace verlinde {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SelfCheckOptions {
  bool quick = false;
  int threads = 1;
};

namespace selfcheck {

inline std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

// 1. three Verlinde routes agree on every graph
inline CriterionResult verlinde_triple(const SelfCheckOptions& o) {
  CriterionResult r{1, "Verlinde triple agreement", true, ""};
  const int kmax = o.quick ? 4 : 8;
  int cases = 0;
  for (int g = 2; g <= 3; ++g) {
    const auto graphs = enumerate_trivalent(g);
    for (int k = 1; k <= kmax; ++k) {
      const BigInt ch = verlinde::verlinde(g, k, VerlindeRoute::Characters);
      const BigInt cl = verlinde::verlinde(g, k, VerlindeRoute::Closed);
      if (ch != cl) {
        r.pass = false;
        r.detail += "characters != closed at g=" + std::to_string(g) + " k=" + std::to_string(k) + "; ";
      }
      for (const auto& gr : graphs) {
        ++cases;
        if (BigInt(count_weights(gr, k, nullptr, o.threads)) != cl) {
          r.pass = false;
          r.detail += "weight count mismatch at g=" + std::to_string(g) + " k=" + std::to_string(k) + "; ";
        }
      }
    }
  }
  const std::array<std::array<int, 3>, 4> spots{{{2, 1, 4}, {2, 2, 10}, {3, 1, 8}, {3, 2, 36}}};
  for (auto [g, k, v] : spots)
    if (verlinde::verlinde(g, k, VerlindeRoute::Closed) != v) {
      r.pass = false;
      r.detail += "spot value (" + std::to_string(g) + "," + std::to_string(k) + ") wrong; ";
    }
  if (r.pass) r.detail = std::to_string(cases) + " graph/level cases, spot values 4 10 8 36";
  return r;
}

// 2. theta and dumbbell have the same counts
inline CriterionResult graph_independence(const SelfCheckOptions& o) {
  CriterionResult r{2, "Graph independence", true, ""};
  const int kmax = o.quick ? 6 : 12;
  for (int k = 1; k <= kmax; ++k) {
    const long long a = count_weights(theta_graph(), k), b = count_weights(dumbbell_graph(), k);
    if (a != b) {
      r.pass = false;
      r.detail += "k=" + std::to_string(k) + ": " + std::to_string(a) + " vs " + std::to_string(b) + "; ";
    }
  }
  if (r.pass) r.detail = "theta = dumbbell for k <= " + std::to_string(kmax);
  return r;
}

// 3. genus-2 closed form and the polytope leading coefficient
inline CriterionResult genus_two_closed_form(const SelfCheckOptions& o) {
  CriterionResult r{3, "Genus-2 closed form", true, ""};
  const int kmax = o.quick ? 12 : 40;
  for (int k = 1; k <= kmax; ++k) {
    const long long m = k + 2, expect = m * (m * m - 1) / 6;
    if (count_weights(theta_graph(), k) != expect || verlinde::verlinde(2, k, VerlindeRoute::Closed) != expect) {
      r.pass = false;
      r.detail += "k=" + std::to_string(k) + " mismatch; ";
    }
  }
  auto a = bs_asymptotics(2, 1, 10);
  const bool lead = a.leading_coefficient == Rational(1, 6) && a.lattice_density == Rational(4) &&
                    a.w_volume == Rational(1, 24) && a.predicted == a.leading_coefficient;
  if (!lead) {
    r.pass = false;
    r.detail += "leading coefficient " + a.leading_coefficient.str() + " vs density*volume " + a.predicted.str();
  }
  if (r.pass) r.detail = "k <= " + std::to_string(kmax) + " exact; leading 1/6 = 4 * 1/24";
  return r;
}

// 4. U(1) networks number k^g
inline CriterionResult u1_count(const SelfCheckOptions& o) {
  CriterionResult r{4, "U(1) network count", true, ""};
  const int kmax = o.quick ? 6 : 12;
  int cases = 0;
  for (int g = 2; g <= 3; ++g)
    for (const auto& gr : enumerate_trivalent(g))
      for (int k = 1; k <= kmax; ++k) {
        long long expect = 1;
        for (int i = 0; i < g; ++i) expect *= k;
        ++cases;
        if (u1_networks(gr, k, false).count != expect) {
          r.pass = false;
          r.detail += "g=" + std::to_string(g) + " k=" + std::to_string(k) + "; ";
        }
      }
  if (r.pass) r.detail = std::to_string(cases) + " cases equal k^g";
  return r;
}

// 5. theta numerics
inline CriterionResult theta_numerics(const SelfCheckOptions& o) {
  CriterionResult r{5, "Theta numerics", true, ""};
  const Complex I(0, 1);
  PeriodMatrix W1(1, 1);
  W1(0, 0) = I;
  const Complex v = theta_char({1, {0}}, W1, {0});
  double oracle = 1;
  for (int n = 1; n < 12; ++n) oracle += 2 * std::exp(-std::numbers::pi * n * n);
  const double err0 = std::max(std::abs(v - oracle), std::abs(v.real() - 1.0864348112));
  if (err0 > 1e-9) r.pass = false;

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  auto random_W = [&](int g) {
    Eigen::MatrixXd A(g, g), X(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) A(i, j) = U(rng), X(i, j) = U(rng);
    Eigen::MatrixXd Y = A * A.transpose() + 0.8 * Eigen::MatrixXd::Identity(g, g);
    PeriodMatrix W(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) W(i, j) = Complex((X(i, j) + X(j, i)) / 2, Y(i, j));
    return W;
  };
  auto random_z = [&](int g) {
    CVec z;
    for (int i = 0; i < g; ++i) z.push_back(Complex(U(rng), U(rng)));
    return z;
  };
  double quasi = 0;
  for (int t = 0; t < 20; ++t) {
    const int g = 1 + t % 2, k = 1 + t % 3;
    PeriodMatrix W = random_W(g);
    CVec z = random_z(g);
    ThetaCharacteristic c{k, std::vector<int>(g)};
    for (int i = 0; i < g; ++i) c.l[i] = rng() % k;
    const Complex base = theta_char(c, W, z);
    for (int i = 0; i < g; ++i) {
      CVec zw = z;
      for (int j = 0; j < g; ++j) zw[j] += W(j, i);
      const Complex expect = quasi_period_factor(k, W, z, i) * base;
      quasi = std::max(quasi, std::abs(theta_char(c, W, zw) - expect) / std::max(1.0, std::abs(expect)));
    }
  }
  if (quasi > 1e-9) r.pass = false;

  double pipe = 0;
  for (int t = 0; t < 10; ++t) {
    const int g = 1 + t % 2, k = 1 + t % 3;
    PeriodMatrix W = random_W(g);
    CVec z = random_z(g);
    std::vector<int> l(g);
    for (int i = 0; i < g; ++i) l[i] = rng() % k;
    const Complex a = abelian_cst(delta_distribution(l, k), W, 1.0 / k).evaluate(z);
    const Complex b = theta_char({k, l}, W, z);
    pipe = std::max(pipe, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  if (pipe > 1e-10) r.pass = false;
  r.detail = "theta_0(0,i) err " + fmt(err0) + ", quasi-period " + fmt(quasi) + ", CST(delta) " + fmt(pipe);
  return r;
}

// level-infinity colorings with twice-spins <= nmax
inline std::vector<std::vector<int>> cg_colorings(const Graph& g, int nmax) {
  std::vector<std::vector<int>> out;
  std::vector<int> n(g.num_edges(), 0);
  while (true) {
    bool ok = true;
    for (int v = 0; v < g.num_vertices() && ok; ++v) {
      const auto& s = g.star(v);
      ok = cg_admissible(n[s[0] >> 1], n[s[1] >> 1], n[s[2] >> 1]);
    }
    if (ok) out.push_back(n);
    int i = g.num_edges() - 1;
    while (i >= 0 && ++n[i] > nmax) n[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// 6. spin networks are gauge invariant
inline CriterionResult gauge_invariance(const SelfCheckOptions& o) {
  CriterionResult r{6, "Gauge invariance", true, ""};
  const int transforms = o.quick ? 10 : 100;
  std::mt19937 rng(6);
  double worst = 0;
  int colorings = 0;
  for (const auto& gr : enumerate_trivalent(2)) {
    auto g = std::make_shared<const Graph>(gr);
    for (const auto& col : cg_colorings(gr, 4)) {
      ++colorings;
      SpinNetwork s(g, col);
      for (int t = 0; t < transforms; ++t) {
        auto c = random_connection(g, rng);
        GaugeTransform gt;
        for (int v = 0; v < gr.num_vertices(); ++v) gt.push_back(haar_su2(rng));
        worst = std::max(worst, std::abs(s.value(gauge_act(c, gt)) - s.value(c)));
      }
    }
  }
  r.pass = worst < 1e-10;
  r.detail = std::to_string(colorings) + " colorings x " + std::to_string(transforms) + " transforms, max " +
             fmt(worst);
  return r;
}

// 7. modular data
inline CriterionResult modular_data(const SelfCheckOptions& o) {
  CriterionResult r{7, "Modular data", true, ""};
  const int kmax = o.quick ? 3 : 6;
  double rel = 0, s2 = 0, sword = 0;
  for (int k = 1; k <= kmax; ++k) {
    rel = std::max({rel, orthogonality_residual(k), symmetry_residual(k), pentagon_check(k, o.threads),
                    yang_baxter_residual(k)});
  }
  bool id_exact = true;
  for (int k = 1; k <= 8; ++k) {
    s2 = std::max(s2, check_torus(k).s_squared);
    id_exact = id_exact && heegaard_invariant(parse_heegaard_word(""), k).value == Complex(1);
    const Complex v = heegaard_invariant(parse_heegaard_word("S"), k).value;
    sword = std::max(sword, std::abs(v - std::sqrt(2.0 / (k + 2)) * std::sin(std::numbers::pi / (k + 2))));
  }
  r.pass = rel < 1e-9 && s2 < 1e-12 && id_exact && sword < 1e-10;
  r.detail = "relations " + fmt(rel) + ", S^2 " + fmt(s2) + ", I(id)=1 " + (id_exact ? "exact" : "NOT exact") +
             ", I(S) " + fmt(sword);
  return r;
}

// 8. Newstead identities
inline CriterionResult newstead_exactness(const SelfCheckOptions&) {
  CriterionResult r{8, "Newstead exactness", true, ""};
  int gamma = 0, recur = 0;
  for (int c = 0; 3 * c <= 27; ++c)
    for (int b = 0; 2 * b + 3 * c <= 27; ++b)
      for (int a = b; a + 2 * b + 3 * c <= 27; ++a) {
        NewsteadMonomial z{a, b, c}, gz{a, b, c + 1};
        ++gamma;
        if (normalized_newstead(gz).value != normalized_newstead(z).value) r.pass = false;
      }
  for (int g = 2; 3 * g - 3 <= 30; ++g)
    for (const auto& z : newstead_monomials(g - 1)) {
      if (z.a < z.b) continue;
      NewsteadMonomial gz = z;
      ++gz.c;
      ++recur;
      if (unnormalize(g, gz) != NewsteadRational(g) * unnormalize(g - 1, z)) r.pass = false;
    }
  const bool alpha3 = normalized_newstead({3, 0, 0}).value == NewsteadRational(-8);
  bool bern = true;
  for (int m = 2; m <= 41; ++m) {
    NewsteadRational s = 0, binom = 1;
    for (int j = 0; j < m; ++j) {
      s += binom * bernoulli(j);
      binom = binom * (m - j) / (j + 1);
    }
    bern = bern && s == 0;
  }
  r.pass = r.pass && alpha3 && bern;
  r.detail = std::to_string(gamma) + " gamma reductions, " + std::to_string(recur) + " recurrences, N0(a^3)=" +
             normalized_newstead({3, 0, 0}).value.str() + ", Bernoulli to 40 " + (bern ? "exact" : "FAILED");
  return r;
}

// 9. fusion ring factorization
inline CriterionResult fusion_factorization(const SelfCheckOptions& o) {
  CriterionResult r{9, "Fusion factorization", true, ""};
  for (int g = 2; g <= 3; ++g) {
    const Graph gr = enumerate_trivalent(g).front();
    for (int k = 1; k <= 6; ++k)
      if (FusionRing(k).rk_recursive(g) != BigInt(count_weights(gr, k, nullptr, o.threads))) {
        r.pass = false;
        r.detail += "rk mismatch g=" + std::to_string(g) + " k=" + std::to_string(k) + "; ";
      }
  }
  double resid = 0;
  for (int k = 1; k <= 8; ++k) {
    auto rep = ideal_check(k);
    resid = std::max(resid, rep.character_residual);
    if (!rep.associative || rep.mismatches) {
      r.pass = false;
      r.detail += "ring check failed at k=" + std::to_string(k) + "; ";
    }
  }
  if (resid > 1e-10) r.pass = false;
  if (r.pass) r.detail = "rk recursion = weights (g=2,3, k<=6); associative k<=8; diagonalization " + fmt(resid);
  return r;
}

// 10. graph calculus
inline CriterionResult graph_calculus(const SelfCheckOptions&) {
  CriterionResult r{10, "Graph calculus", true, ""};
  Graph t = theta_graph();
  RibbonStructure planar = default_ribbon(t);
  std::reverse(planar.cyclic_order[1].begin(), planar.cyclic_order[1].end());
  const int genus0 = trace_faces(t, planar).surface_genus;
  if (genus0 != 0) r.pass = false;
  std::string bfs;
  for (int g = 2; g <= 3; ++g) {
    auto all = enumerate_trivalent(g);
    const auto reached = move_closure(all.front()).size();
    bfs += std::to_string(reached) + "/" + std::to_string(all.size()) + " ";
    if (reached != all.size()) r.pass = false;
  }
  int graphs = 0;
  for (int g = 2; g <= 4; ++g)
    for (const auto& gr : enumerate_trivalent(g)) {
      ++graphs;
      if (eulerian_invariant(gr).invariant % 2 != (g - 1) % 2) r.pass = false;
    }
  r.detail = "planar theta genus " + std::to_string(genus0) + "; moves reach " + bfs + "; parity on " +
             std::to_string(graphs) + " graphs";
  return r;
}

}  // namespace selfcheck

inline std::vector<CriterionResult> run_acceptance(const SelfCheckOptions& o = {}) {
  using Fn = CriterionResult (*)(const SelfCheckOptions&);
  const std::vector<Fn> all{selfcheck::verlinde_triple, selfcheck::graph_independence,
                            selfcheck::genus_two_closed_form, selfcheck::u1_count,
                            selfcheck::theta_numerics, selfcheck::gauge_invariance,
                            selfcheck::modular_data, selfcheck::newstead_exactness,
                            selfcheck::fusion_factorization, selfcheck::graph_calculus};
  static const char* names[] = {"Verlinde triple agreement", "Graph independence", "Genus-2 closed form",
                                "U(1) network count",        "Theta numerics",     "Gauge invariance",
                                "Modular data",              "Newstead exactness", "Fusion factorization",
                                "Graph calculus"};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[i](o);
    } catch (const std::exception& e) {
      r.id = static_cast<int>(i) + 1;
      r.name = names[i];
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  // criterion 1 also carries a runtime budget
  if (!o.quick && out[0].seconds >= 30) {
    out[0].pass = false;
    out[0].detail += " (runtime " + std::to_string(out[0].seconds) + " s exceeds 30 s)";
  }
  return out;
}

}  // namespace verlinde
