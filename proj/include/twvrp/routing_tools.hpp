#ifndef TWVRP_ROUTING_TOOLS_HPP
#define TWVRP_ROUTING_TOOLS_HPP

#include <vector>

#include "twvrp/instance.hpp"

namespace twvrp {

// edge_use[e] = how many copies of instance edge record e the subgraph
// contains. Both directions of the Eulerian-subgraph/routing equivalence.

// Requires every vertex to have even degree and every component that holds
// an edge or a client to contain a depot; emits one closed walk per
// component (Hierholzer, rotated to start at the minimum depot) plus a
// zero-length walk for every depot-client not covered by an edge component.
Routing extract_walks(const std::vector<int> &edge_use, const VrpInstance &inst);

std::vector<int> walks_to_subgraph(const Routing &routing, const VrpInstance &inst);

} // namespace twvrp

#endif
