#ifndef TWVRP_CVRP_DP_HPP
#define TWVRP_CVRP_DP_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twvrp/binpacking.hpp"
#include "twvrp/decomposition.hpp"
#include "twvrp/instance.hpp"

namespace twvrp {

// Per-walk weight marker for the load-only variant, where counters elide
// the gas dimension: 0 means every walk of the class has weight zero (copy
// insertion is free), kUntrackedPos means positive, untracked weight.
constexpr Weight kUntrackedPos = -1;

// One counter key: an attached walk class. Endpoints are unordered
// (canonical a <= b), lambda is the demand served by the walk, w is the
// walk weight (or a marker, see above), depot says whether the walk
// contains a depot (the s* side of the paper's counter pair).
struct WalkClass {
  Vertex a = 0;
  Vertex b = 0;
  Weight lambda = 0;
  Weight w = 0;
  bool depot = false;

  auto tie() const { return std::tie(a, b, lambda, w, depot); }
  bool operator<(const WalkClass &o) const { return tie() < o.tie(); }
  bool operator==(const WalkClass &o) const { return tie() == o.tie(); }
};

// Both counters (s, s*) of a cell, kept as one sorted multiset with the
// depot bit inside the key.
struct CounterPair {
  std::vector<std::pair<WalkClass, int>> classes; // sorted, counts >= 1

  void add(const WalkClass &cls, int count);
  Weight lambda_total() const;
  Weight weight_total() const; // meaningful only when gas is tracked
  int walk_total() const;
  bool operator<(const CounterPair &o) const { return classes < o.classes; }
  bool operator==(const CounterPair &o) const { return classes == o.classes; }
};

struct CvrpParams {
  bool track_gas = false;
  Weight ell = 0;  // effective load capacity
  Weight gas = 0;  // per-walk weight cap when track_gas
  int k = 0;
  Weight total_demand = 0;
  std::vector<Weight> demand; // per vertex, 0 for non-clients
  std::vector<bool> depot;
  std::vector<bool> client;
};

CvrpParams make_cvrp_params(const VrpInstance &inst);

// Counter-pair reducibility: (from) ~> (to) iff every partial solution with
// the from-counters can be merged walk-by-walk into one with the
// to-counters. Decided by the generalized bin packing instance whose items
// are from-walks and whose bin kinds are to-walks guarded by the Eulerian
// trail predicate.
bool reducible(const CounterPair &from, const CounterPair &to, const CvrpParams &params);

struct CvrpDpOptions {
  int zero_count_cap = 16;  // exact-count cap for untracked positive zero classes
  int max_merge_items = 18; // item cap per merge enumeration
  long long merge_step_budget = 40'000'000;
  bool cross_check_reducibility = true; // gate merge candidates through reducible()
  bool validate_witnesses = false;
};

struct CvrpStats {
  bool guard_hit = false;
  std::string guard_reason;
  size_t peak_cells = 0;
  size_t merge_calls = 0;
  size_t reducible_calls = 0;
};

struct CvrpSolution {
  Weight weight = 0;
  Routing routing;
};

struct CvrpResult {
  std::optional<CvrpSolution> solution;
  CvrpStats stats;
};

// The multigraph whose copies the nice decomposition introduces: one copy
// per parallel edge, no capacity doubling.
Multigraph instance_multigraph(const VrpInstance &inst);

CvrpResult solve_cvrp_tw(const VrpInstance &inst, const NiceDecomposition &nd,
                         const Multigraph &g, const CvrpDpOptions &opts = {});

CvrpResult solve_cvrp_tw(const VrpInstance &inst, const CvrpDpOptions &opts = {});

} // namespace twvrp

#endif
