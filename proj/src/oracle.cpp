#include "twvrp/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace twvrp {

namespace {

int uf_find(std::vector<int> &parent, int x) {
  while (parent[x] != x)
    x = parent[x] = parent[parent[x]];
  return x;
}

} // namespace

std::optional<Weight> oracle_vrp(const VrpInstance &inst, const OracleLimits &limits) {
  if (inst.variant != Variant::VRP && inst.variant != Variant::EVRP)
    throw ValidationError("oracle_vrp: requires VRP or EVRP");
  const Graph &g = inst.graph;

  // copy budget per edge record: min(kappa, 2) per parallel edge; the size
  // guard counts parallel edges (each a 0..2 choice)
  std::vector<int> budget(g.edges.size());
  long long parallel_total = 0;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    Weight cap = inst.variant == Variant::EVRP ? (*inst.edge_caps)[e] : 2;
    budget[e] = static_cast<int>(std::min<Weight>(cap, 2)) * g.edges[e].mult;
    parallel_total += g.edges[e].mult;
  }
  if (g.n > limits.max_n || parallel_total > limits.max_copies)
    throw ScaleGuardError("oracle_vrp: size guard exceeded");

  std::optional<Weight> best;
  std::vector<int> use(g.edges.size(), 0);
  // odometer over edge-use vectors
  while (true) {
    // feasibility of this sub-multiset
    std::vector<long long> degree(g.n, 0);
    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    Weight weight = 0;
    for (size_t e = 0; e < g.edges.size(); ++e)
      if (use[e] > 0) {
        degree[g.edges[e].u] += use[e];
        degree[g.edges[e].v] += use[e];
        parent[uf_find(parent, g.edges[e].u)] = uf_find(parent, g.edges[e].v);
        weight += g.edges[e].w * use[e];
      }
    bool ok = true;
    for (Vertex v = 0; v < g.n && ok; ++v)
      if (degree[v] % 2 != 0)
        ok = false;
    if (ok) {
      // every edge component needs a depot; isolated clients must be depots
      std::vector<char> comp_has_depot(g.n, 0);
      for (Vertex d : inst.depots)
        comp_has_depot[uf_find(parent, d)] = 1;
      int components = 0;
      std::vector<char> counted(g.n, 0);
      for (Vertex v = 0; v < g.n && ok; ++v) {
        if (degree[v] == 0)
          continue;
        int root = uf_find(parent, v);
        if (!comp_has_depot[root])
          ok = false;
        else if (!counted[root]) {
          counted[root] = 1;
          components++;
        }
      }
      for (Vertex c : inst.clients) {
        if (!ok)
          break;
        if (degree[c] == 0) {
          if (!inst.is_depot(c))
            ok = false;
          else
            components++; // zero-length walk, own vehicle
        }
      }
      if (ok && components <= inst.k)
        if (!best || weight < *best)
          best = weight;
    }
    // advance
    size_t pos = 0;
    while (pos < use.size() && use[pos] == budget[pos])
      use[pos++] = 0;
    if (pos == use.size())
      break;
    use[pos]++;
  }
  return best;
}

namespace {

// all-pairs shortest path weights, local to the oracle
std::vector<std::vector<Weight>> apsp_table(const Graph &g) {
  std::vector<std::vector<Weight>> dist(g.n, std::vector<Weight>(g.n, kInfWeight));
  for (Vertex v = 0; v < g.n; ++v)
    dist[v][v] = 0;
  for (const EdgeRec &e : g.edges) {
    dist[e.u][e.v] = std::min(dist[e.u][e.v], e.w);
    dist[e.v][e.u] = std::min(dist[e.v][e.u], e.w);
  }
  for (Vertex m = 0; m < g.n; ++m)
    for (Vertex a = 0; a < g.n; ++a)
      for (Vertex b = 0; b < g.n; ++b)
        if (dist[a][m] < kInfWeight && dist[m][b] < kInfWeight)
          dist[a][b] = std::min(dist[a][b], dist[a][m] + dist[m][b]);
  return dist;
}

// minimum closed-tour weight over a depot for the given visiting order,
// infinity when unreachable or above the gas cap
Weight best_tour(const VrpInstance &inst, const std::vector<std::vector<Weight>> &dist,
                 const std::vector<Vertex> &order) {
  Weight chain = 0;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    if (dist[order[i]][order[i + 1]] >= kInfWeight)
      return kInfWeight;
    chain += dist[order[i]][order[i + 1]];
  }
  Weight best = kInfWeight;
  for (Vertex d : inst.depots) {
    if (dist[d][order.front()] >= kInfWeight || dist[order.back()][d] >= kInfWeight)
      continue;
    best = std::min(best, dist[d][order.front()] + chain + dist[order.back()][d]);
  }
  return best;
}

// minimum feasible weight for one vehicle serving exactly this client set
Weight best_vehicle(const VrpInstance &inst, const std::vector<std::vector<Weight>> &dist,
                    std::vector<Vertex> clients) {
  if (has_load(inst.variant)) {
    Weight load = 0;
    for (Vertex c : clients)
      load += inst.demand_of(c);
    if (load > *inst.load_cap)
      return kInfWeight;
  }
  std::sort(clients.begin(), clients.end());
  Weight best = kInfWeight;
  do {
    best = std::min(best, best_tour(inst, dist, clients));
  } while (std::next_permutation(clients.begin(), clients.end()));
  if (has_gas(inst.variant) && best > *inst.gas_cap)
    return kInfWeight;
  return best;
}

} // namespace

std::optional<Weight> oracle_cvrp(const VrpInstance &inst, const OracleLimits &limits) {
  if (inst.variant == Variant::EVRP)
    throw ValidationError("oracle_cvrp: EVRP is not supported");
  const auto &clients = inst.clients;
  if (static_cast<int>(clients.size()) > limits.max_clients || inst.k > limits.max_k)
    throw ScaleGuardError("oracle_cvrp: size guard exceeded");

  auto dist = apsp_table(inst.graph);

  if (clients.empty())
    return 0;
  if (inst.k == 0)
    return std::nullopt;

  // assignment odometer: client i -> vehicle in [0, k)
  std::vector<int> assign(clients.size(), 0);
  std::optional<Weight> best;
  while (true) {
    std::vector<std::vector<Vertex>> groups(inst.k);
    for (size_t i = 0; i < clients.size(); ++i)
      groups[assign[i]].push_back(clients[i]);
    Weight total = 0;
    bool ok = true;
    for (const auto &group : groups) {
      if (group.empty())
        continue;
      Weight w = best_vehicle(inst, dist, group);
      if (w >= kInfWeight) {
        ok = false;
        break;
      }
      total += w;
    }
    if (ok && (!best || total < *best))
      best = total;

    size_t pos = 0;
    while (pos < assign.size() && assign[pos] == inst.k - 1)
      assign[pos++] = 0;
    if (pos == assign.size())
      break;
    assign[pos]++;
  }
  return best;
}

} // namespace twvrp
