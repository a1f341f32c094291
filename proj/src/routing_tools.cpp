#include "twvrp/routing_tools.hpp"

#include <algorithm>
#include <numeric>

namespace twvrp {

namespace {

int uf_find(std::vector<int> &parent, int x) {
  while (parent[x] != x)
    x = parent[x] = parent[parent[x]];
  return x;
}

// Closed Eulerian circuit through the given component, starting at start.
Walk hierholzer(const VrpInstance &inst, Vertex start,
                std::vector<std::vector<std::pair<Vertex, int>>> &incident,
                std::vector<int> &remaining) {
  // incident[v] holds (other endpoint, edge record) entries; remaining[e]
  // counts unused copies of record e.
  std::vector<Vertex> circuit;
  std::vector<int> circuit_edges;
  std::vector<std::pair<Vertex, int>> stack_v; // (vertex, edge taken to get here)
  stack_v.push_back({start, -1});
  std::vector<size_t> cursor(inst.graph.n, 0);
  while (!stack_v.empty()) {
    auto [v, via] = stack_v.back();
    bool advanced = false;
    while (cursor[v] < incident[v].size()) {
      auto [u, e] = incident[v][cursor[v]];
      if (remaining[e] == 0) {
        cursor[v]++;
        continue;
      }
      remaining[e]--;
      stack_v.push_back({u, e});
      advanced = true;
      break;
    }
    if (!advanced) {
      circuit.push_back(v);
      circuit_edges.push_back(via);
      stack_v.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  std::reverse(circuit_edges.begin(), circuit_edges.end());
  Walk walk;
  walk.vertices = circuit;
  // circuit_edges[i] is the edge leading from vertex i to i+1 after the
  // reversal, except the trailing -1 sentinel
  for (size_t i = 0; i + 1 < circuit.size(); ++i)
    walk.edge_ids.push_back(circuit_edges[i + 1]);
  return walk;
}

} // namespace

Routing extract_walks(const std::vector<int> &edge_use, const VrpInstance &inst) {
  const Graph &g = inst.graph;
  if (edge_use.size() != g.edges.size())
    throw ValidationError("extract_walks: edge_use must align with edge records");

  std::vector<long long> degree(g.n, 0);
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (edge_use[e] < 0)
      throw ValidationError("extract_walks: negative edge use");
    if (edge_use[e] == 0)
      continue;
    degree[g.edges[e].u] += edge_use[e];
    degree[g.edges[e].v] += edge_use[e];
    parent[uf_find(parent, g.edges[e].u)] = uf_find(parent, g.edges[e].v);
  }
  for (Vertex v = 0; v < g.n; ++v)
    if (degree[v] % 2 != 0)
      throw ValidationError("extract_walks: not Eulerian at " + std::to_string(v));

  // one depot per edge component, minimum id for determinism
  std::vector<Vertex> comp_depot(g.n, -1);
  for (Vertex d : inst.depots) {
    int root = uf_find(parent, d);
    if (comp_depot[root] < 0)
      comp_depot[root] = d;
  }

  std::vector<std::vector<std::pair<Vertex, int>>> incident(g.n);
  std::vector<int> remaining(g.edges.size(), 0);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (edge_use[e] == 0)
      continue;
    remaining[e] = edge_use[e];
    incident[g.edges[e].u].push_back({g.edges[e].v, static_cast<int>(e)});
    incident[g.edges[e].v].push_back({g.edges[e].u, static_cast<int>(e)});
  }

  Routing routing;
  std::vector<bool> comp_done(g.n, false);
  for (Vertex v = 0; v < g.n; ++v) {
    if (degree[v] == 0)
      continue;
    int root = uf_find(parent, v);
    if (comp_done[root])
      continue;
    comp_done[root] = true;
    if (comp_depot[root] < 0)
      throw ValidationError("extract_walks: component of vertex " + std::to_string(v) +
                            " contains no depot");
    routing.walks.push_back(hierholzer(inst, comp_depot[root], incident, remaining));
  }

  // depot-clients untouched by any edge become zero-length walks
  for (Vertex c : inst.clients) {
    if (degree[c] > 0)
      continue;
    if (!inst.is_depot(c))
      throw ValidationError("extract_walks: client " + std::to_string(c) +
                            " is isolated and not a depot");
    Walk w;
    w.vertices = {c};
    routing.walks.push_back(std::move(w));
  }

  if (static_cast<int>(routing.walks.size()) > inst.k)
    throw ValidationError("extract_walks: " + std::to_string(routing.walks.size()) +
                          " components exceed k=" + std::to_string(inst.k));

  for (Vertex c : inst.clients)
    for (size_t wi = 0; wi < routing.walks.size(); ++wi) {
      const auto &vs = routing.walks[wi].vertices;
      if (std::find(vs.begin(), vs.end(), c) != vs.end()) {
        routing.assignment[c] = static_cast<int>(wi);
        break;
      }
    }
  return routing;
}

std::vector<int> walks_to_subgraph(const Routing &routing, const VrpInstance &inst) {
  std::vector<int> use(inst.graph.edges.size(), 0);
  for (const Walk &w : routing.walks)
    for (int e : w.edge_ids) {
      if (e < 0 || e >= static_cast<int>(use.size()))
        throw ValidationError("walks_to_subgraph: edge id out of range");
      use[e]++;
    }
  return use;
}

} // namespace twvrp
