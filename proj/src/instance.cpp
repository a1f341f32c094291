#include "twvrp/instance.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace twvrp {

std::string variant_name(Variant v) {
  switch (v) {
  case Variant::VRP:
    return "VRP";
  case Variant::EVRP:
    return "EVRP";
  case Variant::LoadCVRP:
    return "LoadCVRP";
  case Variant::GasCVRP:
    return "GasCVRP";
  case Variant::LoadGasCVRP:
    return "LoadGasCVRP";
  }
  return "?";
}

std::optional<Variant> variant_from_name(const std::string &name) {
  if (name == "VRP")
    return Variant::VRP;
  if (name == "EVRP")
    return Variant::EVRP;
  if (name == "LoadCVRP")
    return Variant::LoadCVRP;
  if (name == "GasCVRP")
    return Variant::GasCVRP;
  if (name == "LoadGasCVRP")
    return Variant::LoadGasCVRP;
  return std::nullopt;
}

bool VrpInstance::is_depot(Vertex v) const {
  return std::binary_search(depots.begin(), depots.end(), v);
}

bool VrpInstance::is_client(Vertex v) const {
  return std::binary_search(clients.begin(), clients.end(), v);
}

Weight VrpInstance::demand_of(Vertex c) const {
  if (!demands)
    return 1;
  auto it = demands->find(c);
  if (it == demands->end())
    throw ValidationError("demands: missing entry for client " + std::to_string(c));
  return it->second;
}

Weight VrpInstance::total_demand() const {
  Weight total = 0;
  for (Vertex c : clients)
    total = checked_add(total, demand_of(c));
  return total;
}

Weight VrpInstance::total_edge_weight() const {
  Weight total = 0;
  for (const EdgeRec &e : graph.edges)
    total = checked_add(total, e.w * e.mult);
  return total;
}

namespace {

void check_vertex_set(const std::vector<Vertex> &vs, int n, const std::string &field) {
  for (size_t i = 0; i + 1 < vs.size(); ++i)
    if (vs[i] >= vs[i + 1])
      throw ValidationError(field + ": must be sorted and duplicate-free");
  for (Vertex v : vs)
    if (v < 0 || v >= n)
      throw ValidationError(field + ": vertex id " + std::to_string(v) + " out of range");
}

} // namespace

void VrpInstance::validate() const {
  graph.validate();
  check_vertex_set(depots, graph.n, "depots");
  check_vertex_set(clients, graph.n, "clients");
  if (depots.empty())
    throw ValidationError("depots: must be nonempty");
  if (k < 0)
    throw ValidationError("k: must be nonnegative");

  const bool load = has_load(variant);
  const bool gas = has_gas(variant);

  if (edge_caps && variant != Variant::EVRP)
    throw ValidationError("kappa: field kappa forbidden for " + variant_name(variant));
  if (variant == Variant::EVRP) {
    if (!edge_caps)
      throw ValidationError("kappa: required for EVRP");
    if (edge_caps->size() != graph.edges.size())
      throw ValidationError("kappa: must align with edges");
    for (Weight c : *edge_caps)
      if (c < 0)
        throw ValidationError("kappa: capacities must be nonnegative");
  }

  if (load) {
    if (!load_cap)
      throw ValidationError("ell: required for " + variant_name(variant));
    if (*load_cap < 1)
      throw ValidationError("ell: must be positive");
    if (!demands)
      throw ValidationError("demands: required for " + variant_name(variant));
    for (const auto &[c, d] : *demands) {
      if (!is_client(c))
        throw ValidationError("demands: vertex " + std::to_string(c) + " is not a client");
      if (d < 1)
        throw ValidationError("demands: demand must be positive");
    }
    for (Vertex c : clients)
      if (!demands->count(c))
        throw ValidationError("demands: missing entry for client " + std::to_string(c));
  } else {
    if (load_cap)
      throw ValidationError("ell: field ell forbidden for " + variant_name(variant));
    if (demands)
      throw ValidationError("demands: field demands forbidden for " + variant_name(variant));
  }

  if (gas) {
    if (!gas_cap)
      throw ValidationError("g: required for " + variant_name(variant));
    if (*gas_cap < 0)
      throw ValidationError("g: must be nonnegative");
  } else if (gas_cap) {
    throw ValidationError("g: field g forbidden for " + variant_name(variant));
  }

  if (weight_bound && *weight_bound < 0)
    throw ValidationError("r: must be nonnegative");
  if (!names.empty() && names.size() != static_cast<size_t>(graph.n))
    throw ValidationError("names: must align with vertex count");
}

Weight walk_weight(const VrpInstance &inst, const Walk &walk) {
  Weight total = 0;
  for (int e : walk.edge_ids)
    total = checked_add(total, inst.graph.edges[e].w);
  return total;
}

namespace {

// Resolves the edge record of each step and checks it really connects the
// consecutive vertices; throws on structural errors.
void check_walk_structure(const VrpInstance &inst, const Walk &walk, size_t wi) {
  const std::string where = "walk " + std::to_string(wi);
  if (walk.vertices.empty())
    throw ValidationError(where + ": empty vertex sequence");
  for (Vertex v : walk.vertices)
    if (v < 0 || v >= inst.graph.n)
      throw ValidationError(where + ": vertex id out of range");
  if (walk.edge_ids.size() + 1 != walk.vertices.size() && !(walk.zero_length() && walk.edge_ids.empty()))
    throw ValidationError(where + ": edge_ids must have one entry per step");
  for (size_t i = 0; i < walk.edge_ids.size(); ++i) {
    int e = walk.edge_ids[i];
    if (e < 0 || e >= static_cast<int>(inst.graph.edges.size()))
      throw ValidationError(where + ": edge id out of range");
    const EdgeRec &rec = inst.graph.edges[e];
    Vertex a = walk.vertices[i], b = walk.vertices[i + 1];
    if (!((rec.u == a && rec.v == b) || (rec.u == b && rec.v == a)))
      throw ValidationError(where + ": edge " + std::to_string(e) + " does not connect step " +
                            std::to_string(i));
  }
}

} // namespace

VerificationReport verify_routing(const VrpInstance &inst, const Routing &routing,
                                  const VerifyOptions &opts) {
  VerificationReport report;
  for (size_t wi = 0; wi < routing.walks.size(); ++wi)
    check_walk_structure(inst, routing.walks[wi], wi);

  auto violate = [&report](const std::string &msg) { report.violations.push_back(msg); };

  if (static_cast<int>(routing.walks.size()) > inst.k)
    violate("routing uses " + std::to_string(routing.walks.size()) + " vehicles, more than k=" +
            std::to_string(inst.k));

  for (size_t wi = 0; wi < routing.walks.size(); ++wi) {
    const Walk &w = routing.walks[wi];
    if (w.vertices.front() != w.vertices.back())
      violate("walk " + std::to_string(wi) + " is not closed");
    if (!inst.is_depot(w.vertices.front()))
      violate("walk " + std::to_string(wi) + " does not start at a depot");
    report.total_weight = checked_add(report.total_weight, walk_weight(inst, w));
  }

  for (Vertex c : inst.clients) {
    auto it = routing.assignment.find(c);
    if (it == routing.assignment.end()) {
      violate("client " + std::to_string(c) + " has no assigned vehicle");
      continue;
    }
    int wi = it->second;
    if (wi < 0 || wi >= static_cast<int>(routing.walks.size())) {
      violate("client " + std::to_string(c) + " assigned to missing walk " + std::to_string(wi));
      continue;
    }
    const Walk &w = routing.walks[wi];
    bool visited = std::find(w.vertices.begin(), w.vertices.end(), c) != w.vertices.end();
    if (visited && opts.strict_zero_length_service && w.zero_length())
      visited = false;
    if (!visited)
      violate("client " + std::to_string(c) + " is not visited by its assigned walk " +
              std::to_string(wi));
  }

  if (inst.variant == Variant::EVRP) {
    std::vector<long long> use(inst.graph.edges.size(), 0);
    for (const Walk &w : routing.walks)
      for (int e : w.edge_ids)
        use[e]++;
    for (size_t e = 0; e < use.size(); ++e) {
      long long cap = (*inst.edge_caps)[e] * inst.graph.edges[e].mult;
      if (use[e] > cap)
        violate("edge " + std::to_string(e) + " used " + std::to_string(use[e]) +
                " times, capacity " + std::to_string(cap));
    }
  }

  if (has_load(inst.variant)) {
    std::vector<Weight> load(routing.walks.size(), 0);
    for (const auto &[c, wi] : routing.assignment)
      if (inst.is_client(c) && wi >= 0 && wi < static_cast<int>(load.size()))
        load[wi] = checked_add(load[wi], inst.demand_of(c));
    for (size_t wi = 0; wi < load.size(); ++wi)
      if (load[wi] > *inst.load_cap)
        violate("load exceeded on walk " + std::to_string(wi));
  }

  if (has_gas(inst.variant)) {
    for (size_t wi = 0; wi < routing.walks.size(); ++wi)
      if (walk_weight(inst, routing.walks[wi]) > *inst.gas_cap)
        violate("gas exceeded on walk " + std::to_string(wi));
  }

  if (inst.weight_bound && report.total_weight > *inst.weight_bound)
    violate("total weight " + std::to_string(report.total_weight) + " exceeds bound r=" +
            std::to_string(*inst.weight_bound));

  report.feasible = report.violations.empty();
  return report;
}

ContractResult contract_zero_edges(const VrpInstance &inst) {
  if (inst.variant != Variant::VRP && inst.variant != Variant::GasCVRP)
    throw ValidationError("contract_zero_edges: unsupported variant " + variant_name(inst.variant) +
                          " (demands cannot be merged across a contraction)");

  const int n = inst.graph.n;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const EdgeRec &e : inst.graph.edges)
    if (e.w == 0)
      parent[find(e.u)] = find(e.v);

  // Dense renumbering: representative order by smallest original id.
  std::vector<Vertex> old_to_new(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (find(v) == v)
      old_to_new[v] = next++;
  for (int v = 0; v < n; ++v)
    old_to_new[v] = old_to_new[find(v)];

  ContractResult out;
  out.old_to_new = old_to_new;
  VrpInstance &res = out.instance;
  res.variant = inst.variant;
  res.k = inst.k;
  res.gas_cap = inst.gas_cap;
  res.weight_bound = inst.weight_bound;
  res.graph.n = next;
  for (const EdgeRec &e : inst.graph.edges) {
    if (e.w == 0)
      continue;
    Vertex u = old_to_new[e.u], v = old_to_new[e.v];
    if (u == v)
      continue; // positive edge inside a merged group: a loop, never useful
    res.graph.edges.push_back({std::min(u, v), std::max(u, v), e.w, e.mult});
  }

  std::set<Vertex> depots, clients;
  for (Vertex d : inst.depots)
    depots.insert(old_to_new[d]);
  for (Vertex c : inst.clients)
    clients.insert(old_to_new[c]);
  res.depots.assign(depots.begin(), depots.end());
  res.clients.assign(clients.begin(), clients.end());

  // Merged vertices keep a compound name for reporting.
  std::vector<std::vector<int>> members(next);
  for (int v = 0; v < n; ++v)
    members[old_to_new[v]].push_back(v);
  bool any_merge = false;
  for (const auto &m : members)
    if (m.size() > 1)
      any_merge = true;
  if (any_merge || !inst.names.empty()) {
    res.names.resize(next);
    for (int v = 0; v < next; ++v) {
      std::string name;
      for (int orig : members[v]) {
        if (!name.empty())
          name += "+";
        name += inst.names.empty() ? std::to_string(orig) : inst.names[orig];
      }
      res.names[v] = name;
    }
  }
  res.validate();
  return out;
}

} // namespace twvrp
