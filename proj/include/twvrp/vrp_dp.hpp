#ifndef TWVRP_VRP_DP_HPP
#define TWVRP_VRP_DP_HPP

#include <map>
#include <optional>

#include "twvrp/decomposition.hpp"
#include "twvrp/instance.hpp"
#include "twvrp/partition.hpp"

namespace twvrp {

// Replaces every edge by min(kappa, 2) parallel copies (VRP: two copies);
// zero-capacity edges vanish. Multiplicity expands first.
Multigraph expand_capacities(const VrpInstance &inst);

// Presignature (X, L, c): bag subset in use, odd-degree subset, count of
// finished depot components. Masks index the node's sorted bag.
struct Presignature {
  uint32_t x_mask = 0;
  uint32_t l_mask = 0;
  int c = 0;

  bool operator<(const Presignature &o) const {
    return std::tie(x_mask, l_mask, c) < std::tie(o.x_mask, o.l_mask, o.c);
  }
};

struct VrpDpTable {
  // per node: presignature -> set of marked partitions over the X subset
  std::vector<std::map<Presignature, MarkedPartitionSet>> cells;
};

VrpDpTable run_dp(const VrpInstance &inst, const Multigraph &g, const NiceDecomposition &nd);

struct VrpSolution {
  Weight weight = 0;
  Routing routing;
  std::vector<int> edge_use; // per instance edge record
};

// Optimum over the root entries dp[root, {}, {}, c] for c <= k, with the
// witness subgraph reconstructed by re-deriving predecessor choices.
std::optional<VrpSolution> solve_vrp_tw(const VrpInstance &inst, const NiceDecomposition &nd,
                                        const Multigraph &g);

// Convenience: expansion + heuristic decomposition + DP.
std::optional<VrpSolution> solve_vrp_tw(const VrpInstance &inst);

// Test hook: reconstructs the partial-solution edge multiset witnessing one
// stored marked partition (copy ids of the expanded multigraph).
std::vector<int> reconstruct_partial(const VrpInstance &inst, const Multigraph &g,
                                     const NiceDecomposition &nd, const VrpDpTable &table, int node,
                                     const Presignature &sig, const MarkedPartition &entry);

} // namespace twvrp

#endif
