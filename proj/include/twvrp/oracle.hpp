#ifndef TWVRP_ORACLE_HPP
#define TWVRP_ORACLE_HPP

#include <optional>

#include "twvrp/instance.hpp"

namespace twvrp {

// Deliberately simple exhaustive solvers used as ground truth in tests.
// They share no code with the production solvers.

struct OracleLimits {
  int max_n = 8;
  int max_copies = 14;  // expanded edge copies (uncapacitated oracle)
  int max_clients = 6;  // capacitated oracle
  int max_k = 3;        // capacitated oracle
};

// Enumerates every sub-multiset of the capacity-expanded multigraph (each
// edge 0/1/2 copies, capped by kappa) and keeps the Eulerian ones whose
// edge or client components all contain depots, with at most k components.
std::optional<Weight> oracle_vrp(const VrpInstance &inst, const OracleLimits &limits = {});

// Enumerates client-to-vehicle assignments, depot choices and visiting
// orders; walks are shortest-path concatenations, which is weight-optimal
// per visiting order, so checking the capacity predicates on them is exact.
std::optional<Weight> oracle_cvrp(const VrpInstance &inst, const OracleLimits &limits = {});

} // namespace twvrp

#endif
