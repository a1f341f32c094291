#ifndef TWVRP_INSTANCE_HPP
#define TWVRP_INSTANCE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twvrp/graph.hpp"

namespace twvrp {

enum class Variant { VRP, EVRP, LoadCVRP, GasCVRP, LoadGasCVRP };

std::string variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string &name);

inline bool has_load(Variant v) {
  return v == Variant::LoadCVRP || v == Variant::LoadGasCVRP;
}
inline bool has_gas(Variant v) {
  return v == Variant::GasCVRP || v == Variant::LoadGasCVRP;
}

// A full problem instance: graph, depots D, clients C, vehicle count k and
// the variant-specific fields. Immutable after construction; solvers share
// instances freely across threads.
struct VrpInstance {
  Graph graph;
  std::vector<Vertex> depots;  // sorted, unique, nonempty
  std::vector<Vertex> clients; // sorted, unique
  int k = 0;
  Variant variant = Variant::VRP;

  std::optional<std::vector<Weight>> edge_caps;    // kappa, aligned with edges (EVRP)
  std::optional<Weight> load_cap;                  // ell
  std::optional<std::map<Vertex, Weight>> demands; // Lambda, load variants
  std::optional<Weight> gas_cap;                   // g
  std::optional<Weight> weight_bound;              // r; absent = optimize

  // Vertex names for reporting only; empty or aligned with vertex ids.
  std::vector<std::string> names;

  bool is_depot(Vertex v) const;
  bool is_client(Vertex v) const;
  Weight demand_of(Vertex c) const; // load variants only

  Weight total_demand() const;
  Weight total_edge_weight() const; // counts multiplicity

  // Checks all invariants; throws ValidationError naming the field.
  void validate() const;
};

// A closed walk: vertex sequence with the edge record chosen for each step.
// A single vertex with no edges is a legal zero-length walk.
struct Walk {
  std::vector<Vertex> vertices;
  std::vector<int> edge_ids; // size == vertices.size() - 1 (or both empty)

  bool zero_length() const { return vertices.size() <= 1; }
};

struct Routing {
  std::vector<Walk> walks;
  std::map<Vertex, int> assignment; // client -> walk index
};

struct VerifyOptions {
  // When true, a zero-length walk does not count as visiting the
  // depot-client it sits on.
  bool strict_zero_length_service = false;
};

struct VerificationReport {
  bool feasible = false;
  Weight total_weight = 0;
  std::vector<std::string> violations;
};

// Checks conditions 1-4 of the routing definition plus the variant's
// capacity predicates. Infeasibility is reported, not thrown; only
// structurally broken input (bad vertex ids, non-edges) throws.
VerificationReport verify_routing(const VrpInstance &inst, const Routing &routing,
                                  const VerifyOptions &opts = {});

Weight walk_weight(const VrpInstance &inst, const Walk &walk);

struct ContractResult {
  VrpInstance instance;
  std::vector<Vertex> old_to_new; // vertex map from the input instance
};

// Contracts all zero-weight edges. Sound for VRP and GasCVRP only; the
// load variants are rejected because demands cannot be merged.
ContractResult contract_zero_edges(const VrpInstance &inst);

} // namespace twvrp

#endif
