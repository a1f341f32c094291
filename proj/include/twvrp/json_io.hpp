#ifndef TWVRP_JSON_IO_HPP
#define TWVRP_JSON_IO_HPP

#include <string>

#include "twvrp/instance.hpp"

namespace twvrp {

// Instance documents are JSON with fields n, edges, depots, clients, k,
// variant and the optional kappa/ell/demands/g/r/names. Routing documents
// carry walks ({"vertices": [...], "edge_ids": [...]}) and an assignment
// map. Both emitters are canonical: parse(emit(x)) == x byte for byte.

VrpInstance parse_instance(const std::string &text);
std::string emit_instance(const VrpInstance &inst);

Routing parse_routing(const std::string &text, const VrpInstance &inst);
std::string emit_routing(const Routing &routing);

} // namespace twvrp

#endif
