#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "verlinde/graph.hpp"

namespace verlinde {

struct GraphDocument {
  Graph graph;
  std::optional<RibbonStructure> ribbon;
};

// {"vertices": N, "edges": [[v1, v2], ...], "parabolic": [v, ...],
//  "ribbon": {"v": [edge, ...]}}.  A loop appears twice in a ribbon list;
// its first occurrence is the dart 2e.
inline GraphDocument graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw StructuralError("graph JSON needs \"vertices\" and \"edges\"");
  int nv = j.at("vertices").get<int>();
  std::vector<std::array<int, 2>> ends;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw StructuralError("each edge must be a pair");
    ends.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  std::vector<int> legs;
  if (j.contains("parabolic"))
    for (const auto& v : j.at("parabolic")) legs.push_back(v.get<int>());
  GraphDocument doc{Graph::with_legs(nv, std::move(ends), legs), std::nullopt};
  if (j.contains("ribbon")) {
    const Graph& g = doc.graph;
    RibbonStructure r;
    r.cyclic_order.assign(nv, {});
    for (auto it = j.at("ribbon").begin(); it != j.at("ribbon").end(); ++it) {
      int v = std::stoi(it.key());
      if (v < 0 || v >= nv) throw StructuralError("ribbon vertex out of range");
      std::map<int, int> seen;
      for (const auto& ev : it.value()) {
        int e = ev.get<int>();
        if (e < 0 || e >= g.num_edges()) throw StructuralError("ribbon edge out of range");
        Dart d;
        if (g.is_loop(e)) {
          d = 2 * e + seen[e]++;
        } else if (g.ends(e)[0] == v) {
          d = 2 * e;
        } else if (g.ends(e)[1] == v) {
          d = 2 * e + 1;
        } else {
          throw StructuralError("ribbon lists an edge not incident to its vertex");
        }
        r.cyclic_order[v].push_back(d);
      }
    }
    validate_ribbon(g, r);
    doc.ribbon = std::move(r);
  }
  return doc;
}

inline nlohmann::json graph_to_json(const Graph& g, const RibbonStructure* ribbon = nullptr) {
  nlohmann::json j;
  j["vertices"] = g.num_vertices();
  j["edges"] = nlohmann::json::array();
  j["parabolic"] = nlohmann::json::array();
  for (const auto& p : g.edge_ends()) {
    if (p[1] == kFreeEnd)
      j["parabolic"].push_back(p[0]);
    else
      j["edges"].push_back({p[0], p[1]});
  }
  if (ribbon) {
    nlohmann::json r = nlohmann::json::object();
    for (int v = 0; v < g.num_vertices(); ++v) {
      nlohmann::json order = nlohmann::json::array();
      for (Dart d : ribbon->cyclic_order[v]) order.push_back(edge_of(d));
      r[std::to_string(v)] = order;
    }
    j["ribbon"] = r;
  }
  return j;
}

inline nlohmann::json canonical_json(const Graph& g) { return graph_to_json(canonical_graph(g)); }

}  // namespace verlinde
