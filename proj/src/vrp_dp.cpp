#include "twvrp/vrp_dp.hpp"

#include <algorithm>
#include <cassert>

#include "twvrp/routing_tools.hpp"

namespace twvrp {

Multigraph expand_capacities(const VrpInstance &inst) {
  if (inst.variant != Variant::VRP && inst.variant != Variant::EVRP)
    throw ValidationError("expand_capacities: requires VRP or EVRP");
  Multigraph g;
  g.n = inst.graph.n;
  for (size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const EdgeRec &rec = inst.graph.edges[e];
    Weight cap = inst.variant == Variant::EVRP ? (*inst.edge_caps)[e] : 2;
    int copies = static_cast<int>(std::min<Weight>(cap, 2));
    for (int m = 0; m < rec.mult; ++m)
      for (int c = 0; c < copies; ++c)
        g.copies.push_back({rec.u, rec.v, rec.w, static_cast<int>(e)});
  }
  return g;
}

namespace {

std::vector<Vertex> mask_to_vertices(const std::vector<Vertex> &bag, uint32_t mask) {
  std::vector<Vertex> out;
  for (size_t i = 0; i < bag.size(); ++i)
    if (mask >> i & 1)
      out.push_back(bag[i]);
  return out;
}

const MarkedPartitionSet *lookup(const std::map<Presignature, MarkedPartitionSet> &cell,
                                 const Presignature &sig) {
  auto it = cell.find(sig);
  return it == cell.end() ? nullptr : &it->second;
}

} // namespace

VrpDpTable run_dp(const VrpInstance &inst, const Multigraph &g, const NiceDecomposition &nd) {
  {
    DecompositionCheck check = validate_nice(nd, g);
    if (!check.valid)
      throw ValidationError("run_dp: invalid nice decomposition: " + check.violations.front());
  }
  const int c_cap = std::min<long long>(inst.k, static_cast<long long>(inst.depots.size()));

  VrpDpTable table;
  table.cells.resize(nd.nodes.size());

  for (size_t t = 0; t < nd.nodes.size(); ++t) {
    const NiceNode &node = nd.nodes[t];
    const std::vector<Vertex> &bag = node.bag;
    auto &cell = table.cells[t];

    switch (node.kind) {
    case NodeKind::Leaf: {
      MarkedPartitionSet set(std::vector<Vertex>{});
      set.insert_min({Partition(std::vector<Vertex>{}), 0, 0});
      cell[{0, 0, 0}] = std::move(set);
      break;
    }

    case NodeKind::IntroduceVertex: {
      const auto &child = table.cells[node.child1];
      Vertex v = node.vertex;
      size_t v_pos = std::find(bag.begin(), bag.end(), v) - bag.begin();
      auto translate = [&](uint32_t mask, bool with_v) {
        uint32_t low = mask & ((1u << v_pos) - 1);
        uint32_t high = mask & ~((1u << v_pos) - 1);
        return low | (high << 1) | (with_v ? (1u << v_pos) : 0);
      };
      bool v_client = inst.is_client(v);
      for (const auto &[csig, src] : child) {
        if (src.empty())
          continue;
        if (!v_client) {
          // v stays outside the partial solution
          Presignature sig{translate(csig.x_mask, false), translate(csig.l_mask, false), csig.c};
          auto [it, fresh] = cell.try_emplace(sig, src);
          if (!fresh)
            it->second = union_min(it->second, src);
        }
        // v enters as an isolated, even-degree singleton
        Presignature sig{translate(csig.x_mask, true), translate(csig.l_mask, false), csig.c};
        MarkedPartitionSet inserted = insert_vertices({v}, inst.depots, src);
        auto [it, fresh] = cell.try_emplace(sig, inserted);
        if (!fresh)
          it->second = union_min(it->second, inserted);
      }
      break;
    }

    case NodeKind::IntroduceEdge: {
      const auto &child = table.cells[node.child1];
      const EdgeCopy &copy = g.copies[node.edge_copy];
      uint32_t uv_mask = 0;
      for (size_t i = 0; i < bag.size(); ++i)
        if (bag[i] == copy.u || bag[i] == copy.v)
          uv_mask |= 1u << i;
      for (const auto &[sig, src] : child) {
        if (src.empty())
          continue;
        // skip the edge
        {
          auto [it, fresh] = cell.try_emplace(sig, src);
          if (!fresh)
            it->second = union_min(it->second, src);
        }
        // use the edge when both endpoints are present: parity flips
        bool both = (sig.x_mask & uv_mask) == uv_mask;
        if (both) {
          Presignature target{sig.x_mask, sig.l_mask ^ uv_mask, sig.c};
          MarkedPartitionSet glued = glue(copy.u, copy.v, src, copy.w);
          auto [it, fresh] = cell.try_emplace(target, glued);
          if (!fresh)
            it->second = union_min(it->second, glued);
        }
      }
      break;
    }

    case NodeKind::Forget: {
      const auto &child = table.cells[node.child1];
      const std::vector<Vertex> &child_bag = nd.nodes[node.child1].bag;
      Vertex v = node.vertex;
      size_t v_pos = std::find(child_bag.begin(), child_bag.end(), v) - child_bag.begin();
      for (const auto &[csig, src] : child) {
        if (src.empty())
          continue;
        bool v_in_x = csig.x_mask >> v_pos & 1;
        bool v_in_l = csig.l_mask >> v_pos & 1;
        // translate child mask positions to parent positions (drop v's bit)
        auto translate = [&](uint32_t mask) {
          uint32_t low = mask & ((1u << v_pos) - 1);
          uint32_t high = mask >> (v_pos + 1);
          return low | (high << v_pos);
        };
        if (v_in_l)
          continue; // odd degree cannot leave the bag
        if (!v_in_x) {
          Presignature sig{translate(csig.x_mask), translate(csig.l_mask), csig.c};
          auto [it, fresh] = cell.try_emplace(sig, src);
          if (!fresh)
            it->second = union_min(it->second, src);
          continue;
        }
        Presignature sig{translate(csig.x_mask), translate(csig.l_mask), csig.c};
        MarkedPartitionSet projected = project({v}, src);
        if (!projected.empty()) {
          auto [it, fresh] = cell.try_emplace(sig, projected);
          if (!fresh)
            it->second = union_min(it->second, projected);
        }
        if (csig.c + 1 <= c_cap) {
          MarkedPartitionSet detached = detach({v}, src);
          if (!detached.empty()) {
            Presignature dsig{sig.x_mask, sig.l_mask, csig.c + 1};
            auto [it, fresh] = cell.try_emplace(dsig, detached);
            if (!fresh)
              it->second = union_min(it->second, detached);
          }
        }
      }
      break;
    }

    case NodeKind::Join: {
      const auto &left = table.cells[node.child1];
      const auto &right = table.cells[node.child2];
      for (const auto &[sig1, src1] : left) {
        for (const auto &[sig2, src2] : right) {
          if (sig1.x_mask != sig2.x_mask)
            continue;
          int c = sig1.c + sig2.c;
          if (c > c_cap)
            continue;
          Presignature sig{sig1.x_mask, sig1.l_mask ^ sig2.l_mask, c};
          MarkedPartitionSet joined = join_sets(src1, src2);
          if (joined.empty())
            continue;
          auto [it, fresh] = cell.try_emplace(sig, joined);
          if (!fresh)
            it->second = union_min(it->second, joined);
        }
      }
      break;
    }
    }
  }
  return table;
}

namespace {

// Applies the forward step of one DP case to a single child entry and
// tests whether it reproduces the target; used for witness re-derivation.
bool glue_matches(Vertex u, Vertex v, Weight w, const MarkedPartition &child,
                  const MarkedPartition &target) {
  MarkedPartitionSet tmp(child.partition.universe());
  tmp.insert_min(child);
  MarkedPartitionSet res = glue(u, v, tmp, w);
  return res.entries().size() == 1 && res.entries()[0].partition == target.partition &&
         res.entries()[0].marked == target.marked && res.entries()[0].weight == target.weight;
}

} // namespace

std::vector<int> reconstruct_partial(const VrpInstance &inst, const Multigraph &g,
                                     const NiceDecomposition &nd, const VrpDpTable &table, int node,
                                     const Presignature &sig, const MarkedPartition &entry) {
  const NiceNode &n = nd.nodes[node];
  const auto find_entry = [&](int t, const Presignature &s,
                              const Partition &p, uint64_t marked,
                              Weight w) -> const MarkedPartition * {
    auto it = table.cells[t].find(s);
    if (it == table.cells[t].end())
      return nullptr;
    for (const MarkedPartition &mp : it->second.entries())
      if (mp.weight == w && mp.marked == marked && mp.partition == p)
        return &mp;
    return nullptr;
  };

  switch (n.kind) {
  case NodeKind::Leaf:
    return {};

  case NodeKind::IntroduceVertex: {
    const std::vector<Vertex> &bag = n.bag;
    const std::vector<Vertex> &child_bag = nd.nodes[n.child1].bag;
    Vertex v = n.vertex;
    std::vector<Vertex> xs = mask_to_vertices(bag, sig.x_mask);
    std::vector<Vertex> ls = mask_to_vertices(bag, sig.l_mask);
    bool v_in_x = std::binary_search(xs.begin(), xs.end(), v);
    std::vector<Vertex> child_x = xs;
    if (v_in_x)
      child_x.erase(std::find(child_x.begin(), child_x.end(), v));
    uint32_t cx = 0, cl = 0;
    for (size_t i = 0; i < child_bag.size(); ++i) {
      if (std::binary_search(child_x.begin(), child_x.end(), child_bag[i]))
        cx |= 1u << i;
      if (std::binary_search(ls.begin(), ls.end(), child_bag[i]))
        cl |= 1u << i;
    }
    Presignature child_sig{cx, cl, sig.c};
    if (!v_in_x)
      return reconstruct_partial(inst, g, nd, table, n.child1, child_sig, entry);
    // drop v's singleton block
    Partition child_p = entry.partition.restrict_to(child_x);
    uint64_t child_marked = 0;
    int v_pos = entry.partition.position_of(v);
    for (size_t i = 0; i < entry.partition.size(); ++i) {
      if (!(entry.marked >> i & 1) || static_cast<int>(i) == v_pos)
        continue;
      Vertex member = entry.partition.universe()[i];
      int pos = child_p.position_of(member);
      child_marked |= 1ull << child_p.reps()[pos];
    }
    const MarkedPartition *child_entry =
        find_entry(n.child1, child_sig, child_p, child_marked, entry.weight);
    if (!child_entry)
      throw std::logic_error("reconstruct: introduce-vertex predecessor missing");
    return reconstruct_partial(inst, g, nd, table, n.child1, child_sig, *child_entry);
  }

  case NodeKind::IntroduceEdge: {
    const EdgeCopy &copy = g.copies[n.edge_copy];
    std::vector<Vertex> xs = mask_to_vertices(n.bag, sig.x_mask);
    bool both = std::binary_search(xs.begin(), xs.end(), copy.u) &&
                std::binary_search(xs.begin(), xs.end(), copy.v);
    // unused-edge path first
    if (const MarkedPartition *same =
            find_entry(n.child1, sig, entry.partition, entry.marked, entry.weight))
      return reconstruct_partial(inst, g, nd, table, n.child1, sig, *same);
    if (both) {
      uint32_t uv_mask = 0;
      for (size_t i = 0; i < n.bag.size(); ++i)
        if (n.bag[i] == copy.u || n.bag[i] == copy.v)
          uv_mask |= 1u << i;
      Presignature child_sig{sig.x_mask, sig.l_mask ^ uv_mask, sig.c};
      auto it = table.cells[n.child1].find(child_sig);
      if (it != table.cells[n.child1].end())
        for (const MarkedPartition &mp : it->second.entries())
          if (glue_matches(copy.u, copy.v, copy.w, mp, entry)) {
            std::vector<int> below =
                reconstruct_partial(inst, g, nd, table, n.child1, child_sig, mp);
            below.push_back(n.edge_copy);
            return below;
          }
    }
    throw std::logic_error("reconstruct: introduce-edge predecessor missing");
  }

  case NodeKind::Forget: {
    const std::vector<Vertex> &child_bag = nd.nodes[n.child1].bag;
    Vertex v = n.vertex;
    size_t v_pos = std::find(child_bag.begin(), child_bag.end(), v) - child_bag.begin();
    auto untranslate = [&](uint32_t mask, bool with_v) {
      uint32_t low = mask & ((1u << v_pos) - 1);
      uint32_t high = mask & ~((1u << v_pos) - 1);
      return low | (high << 1) | (with_v ? (1u << v_pos) : 0);
    };
    // v absent below
    Presignature absent{untranslate(sig.x_mask, false), untranslate(sig.l_mask, false), sig.c};
    if (const MarkedPartition *same =
            find_entry(n.child1, absent, entry.partition, entry.marked, entry.weight))
      return reconstruct_partial(inst, g, nd, table, n.child1, absent, *same);
    // projected or detached
    for (int detach_case = 0; detach_case <= 1; ++detach_case) {
      Presignature child_sig{untranslate(sig.x_mask, true), untranslate(sig.l_mask, false),
                             sig.c - detach_case};
      if (child_sig.c < 0)
        continue;
      auto it = table.cells[n.child1].find(child_sig);
      if (it == table.cells[n.child1].end())
        continue;
      for (const MarkedPartition &mp : it->second.entries()) {
        if (mp.weight != entry.weight)
          continue;
        MarkedPartitionSet tmp(mp.partition.universe());
        tmp.insert_min(mp);
        MarkedPartitionSet res = detach_case ? detach({v}, tmp) : project({v}, tmp);
        if (res.entries().size() == 1 && res.entries()[0].partition == entry.partition &&
            res.entries()[0].marked == entry.marked && res.entries()[0].weight == entry.weight)
          return reconstruct_partial(inst, g, nd, table, n.child1, child_sig, mp);
      }
    }
    throw std::logic_error("reconstruct: forget predecessor missing");
  }

  case NodeKind::Join: {
    uint32_t x_mask = sig.x_mask;
    for (const auto &[sig1, src1] : table.cells[n.child1]) {
      if (sig1.x_mask != x_mask || sig1.c > sig.c)
        continue;
      Presignature sig2{x_mask, sig.l_mask ^ sig1.l_mask, sig.c - sig1.c};
      auto it2 = table.cells[n.child2].find(sig2);
      if (it2 == table.cells[n.child2].end())
        continue;
      for (const MarkedPartition &e1 : src1.entries()) {
        if (e1.weight > entry.weight)
          continue;
        for (const MarkedPartition &e2 : it2->second.entries()) {
          if (e1.weight + e2.weight != entry.weight)
            continue;
          MarkedPartitionSet s1(e1.partition.universe()), s2(e2.partition.universe());
          s1.insert_min(e1);
          s2.insert_min(e2);
          MarkedPartitionSet res = join_sets(s1, s2);
          if (res.entries().size() == 1 && res.entries()[0].partition == entry.partition &&
              res.entries()[0].marked == entry.marked) {
            std::vector<int> left =
                reconstruct_partial(inst, g, nd, table, n.child1, sig1, e1);
            std::vector<int> right =
                reconstruct_partial(inst, g, nd, table, n.child2, sig2, e2);
            left.insert(left.end(), right.begin(), right.end());
            return left;
          }
        }
      }
    }
    throw std::logic_error("reconstruct: join predecessors missing");
  }
  }
  throw std::logic_error("reconstruct: unreachable");
}

std::optional<VrpSolution> solve_vrp_tw(const VrpInstance &inst, const NiceDecomposition &nd,
                                        const Multigraph &g) {
  VrpDpTable table = run_dp(inst, g, nd);
  const auto &root_cell = table.cells[nd.root];
  const int c_cap = std::min<long long>(inst.k, static_cast<long long>(inst.depots.size()));

  std::optional<Weight> best;
  int best_c = -1;
  Partition empty_p{std::vector<Vertex>{}};
  for (int c = 0; c <= c_cap; ++c) {
    const MarkedPartitionSet *set = lookup(root_cell, {0, 0, c});
    if (!set)
      continue;
    auto w = set->weight_of(empty_p, 0);
    if (w && (!best || *w < *best)) {
      best = *w;
      best_c = c;
    }
  }
  if (!best)
    return std::nullopt;

  MarkedPartition root_entry{empty_p, 0, *best};
  std::vector<int> copies =
      reconstruct_partial(inst, g, nd, table, nd.root, {0, 0, best_c}, root_entry);

  VrpSolution sol;
  sol.weight = *best;
  sol.edge_use.assign(inst.graph.edges.size(), 0);
  for (int c : copies)
    sol.edge_use[g.copies[c].orig_edge]++;
  sol.routing = extract_walks(sol.edge_use, inst);
  return sol;
}

std::optional<VrpSolution> solve_vrp_tw(const VrpInstance &inst) {
  Multigraph g = expand_capacities(inst);
  TreeDecomposition td = heuristic_decompose(inst.graph);
  NiceDecomposition nd = nicify(td, g);
  return solve_vrp_tw(inst, nd, g);
}

} // namespace twvrp
