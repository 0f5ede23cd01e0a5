#pragma once

#include <string>
#include <vector>

#include "verlinde/fusion.hpp"
#include "verlinde/graph.hpp"
#include "verlinde/weights.hpp"

namespace verlinde {

enum class VerlindeRoute { Characters, Closed, Weights, Recursion };

inline VerlindeRoute parse_route(const std::string& s) {
  if (s == "characters") return VerlindeRoute::Characters;
  if (s == "closed") return VerlindeRoute::Closed;
  if (s == "weights") return VerlindeRoute::Weights;
  if (s == "recursion") return VerlindeRoute::Recursion;
  throw UsageError("unknown route '" + s + "'");
}

// Number of level-k conformal blocks in genus g.  The floating routes are
// rounded and cross-asserted against the exact fusion recursion.
inline BigInt verlinde(int g, int k, VerlindeRoute via, int threads = 1) {
  if (g < 1) throw DomainError("verlinde needs g >= 1");
  if (k < 1) throw DomainError("level must be positive");
  if (g == 1) return BigInt(k + 1);
  switch (via) {
    case VerlindeRoute::Recursion:
      return FusionRing(k).rk(g);
    case VerlindeRoute::Weights:
      return BigInt(count_weights(multi_theta_graph(g), k, nullptr, threads));
    case VerlindeRoute::Characters:
    case VerlindeRoute::Closed: {
      double raw = via == VerlindeRoute::Characters ? verlinde_characters_raw(g, k) : verlinde_closed_raw(g, k);
      BigInt v = round_checked(raw, "Verlinde sum");
      BigInt exact = FusionRing(k).rk(g);
      if (v != exact)
        throw InvariantViolation("character sum " + v.str() + " differs from fusion recursion " + exact.str());
      return v;
    }
  }
  return 0;
}

struct CountCheckReport {
  int genus = 0;
  int level = 0;
  BigInt verlinde_number;
  std::vector<std::pair<Graph, long long>> counts;
};

// |W^k(G)| over every graph of genus g against the closed formula.
inline CountCheckReport verlinde_count_check(int g, int k, int threads = 1) {
  if (g < 2 || g > 4) throw DomainError("verlinde_count_check supports g in {2,3,4}");
  if (k < 1 || k > 10) throw DomainError("verlinde_count_check supports 1 <= k <= 10");
  CountCheckReport rep;
  rep.genus = g;
  rep.level = k;
  rep.verlinde_number = verlinde(g, k, VerlindeRoute::Closed);
  for (const auto& gr : enumerate_trivalent(g)) {
    long long c = count_weights(gr, k, nullptr, threads);
    rep.counts.push_back({gr, c});
    if (BigInt(c) != rep.verlinde_number)
      throw InvariantViolation("graph with edges " + std::to_string(gr.num_edges()) + " and canonical code " +
                               [&] {
                                 std::string s;
                                 for (int x : canonical_form(gr).code) s += std::to_string(x) + ",";
                                 return s;
                               }() +
                               " has " + std::to_string(c) + " weights, expected " + rep.verlinde_number.str());
  }
  return rep;
}

}  // namespace verlinde
