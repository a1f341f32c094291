#include <doctest.h>

#include <random>
#include <set>

#include "test_helpers.hpp"
#include "twvrp/cvrp_dp.hpp"
#include "twvrp/oracle.hpp"
#include "twvrp/vrp_dp.hpp"

using namespace twvrp;
using namespace twvrp::testing;

namespace {

CvrpDpOptions test_options() {
  CvrpDpOptions opts;
  opts.validate_witnesses = true;
  return opts;
}

void check_against_oracle(const VrpInstance &inst, const CvrpDpOptions &opts = test_options()) {
  auto expected = oracle_cvrp(inst);
  CvrpResult got = solve_cvrp_tw(inst, opts);
  REQUIRE_FALSE(got.stats.guard_hit);
  REQUIRE(expected.has_value() == got.solution.has_value());
  if (expected) {
    CHECK(*expected == got.solution->weight);
    auto report = verify_routing(inst, got.solution->routing);
    CHECK(report.feasible);
    CHECK(report.total_weight == got.solution->weight);
  }
}

VrpInstance random_cvrp_instance(Variant variant, unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  VrpInstance inst;
  int n = pick(1, 6);
  inst.graph.n = n;
  std::set<std::pair<int, int>> seen;
  int edges = pick(0, std::min(9, n * (n - 1) / 2));
  for (int i = 0; i < edges && n >= 2; ++i) {
    int u = pick(0, n - 1), v = pick(0, n - 1);
    if (u == v)
      continue;
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      continue;
    inst.graph.edges.push_back({std::min(u, v), std::max(u, v),
                                static_cast<Weight>(pick(1, 3)), 1});
  }
  inst.k = pick(0, 3);
  std::vector<Vertex> depots, clients;
  for (int v = 0; v < n; ++v) {
    if (pick(0, 2) == 0)
      depots.push_back(v);
    if (pick(0, 1) == 0)
      clients.push_back(v);
  }
  if (depots.empty())
    depots.push_back(pick(0, n - 1));
  inst.depots = depots;
  inst.clients = clients;
  inst.variant = variant;
  if (has_load(variant)) {
    inst.load_cap = pick(1, 3);
    std::map<Vertex, Weight> demands;
    for (Vertex c : clients)
      demands[c] = pick(1, static_cast<int>(*inst.load_cap));
    inst.demands = demands;
  }
  if (has_gas(variant))
    inst.gas_cap = pick(2, 8);
  inst.validate();
  return inst;
}

// keep instances at treewidth <= 2 as judged by the min-fill heuristic
bool width_ok(const VrpInstance &inst) {
  return heuristic_decompose(inst.graph).width() <= 2;
}

} // namespace

TEST_CASE("cvrp dp star with unit loads") {
  VrpInstance inst = star_instance(2);
  inst.variant = Variant::LoadGasCVRP;
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{{1, 1}, {2, 1}};
  inst.gas_cap = 2;
  CvrpResult res = solve_cvrp_tw(inst, test_options());
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->weight == 4);
  CHECK(verify_routing(inst, res.solution->routing).feasible);

  inst.k = 1;
  CvrpResult infeasible = solve_cvrp_tw(inst, test_options());
  CHECK_FALSE(infeasible.solution.has_value());
}

TEST_CASE("cvrp dp no clients") {
  VrpInstance inst = make_instance(3, {{0, 1, 1}, {1, 2, 1}}, {0}, {}, 2, Variant::LoadCVRP);
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{};
  CvrpResult res = solve_cvrp_tw(inst, test_options());
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->weight == 0);
}

TEST_CASE("cvrp dp depot client zero-length walk") {
  VrpInstance inst = make_instance(2, {{0, 1, 5}}, {0}, {0}, 1, Variant::LoadCVRP);
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{{0, 1}};
  CvrpResult res = solve_cvrp_tw(inst, test_options());
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->weight == 0);
  REQUIRE(res.solution->routing.walks.size() == 1);
  CHECK(res.solution->routing.walks[0].zero_length());
}

TEST_CASE("multiplicity counterexample: corridor used more than twice") {
  // depot d=0, cut vertex v=1, three clients 2,3,4 behind v; ell = 1
  VrpInstance inst = make_instance(5, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {1, 4, 1}}, {0},
                                   {2, 3, 4}, 3, Variant::LoadCVRP);
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{{2, 1}, {3, 1}, {4, 1}};
  CvrpResult res = solve_cvrp_tw(inst, test_options());
  REQUIRE(res.solution.has_value());
  CHECK(res.solution->weight == 12);
  auto report = verify_routing(inst, res.solution->routing);
  CHECK(report.feasible);
  // the corridor edge {0,1} is jointly used more than twice,
  // but each individual walk uses every edge at most twice
  int corridor_use = 0;
  for (const Walk &w : res.solution->routing.walks) {
    std::map<int, int> per_walk;
    for (int e : w.edge_ids) {
      per_walk[e]++;
      if (e == 0)
        corridor_use++;
    }
    for (const auto &[e, count] : per_walk)
      CHECK(count <= 2);
  }
  CHECK(corridor_use > 2);
}

TEST_CASE("load variant oracle equivalence") {
  int done = 0;
  for (unsigned seed = 1000; seed < 1150 && done < 60; ++seed) {
    VrpInstance inst = random_cvrp_instance(Variant::LoadCVRP, seed);
    if (!width_ok(inst))
      continue;
    check_against_oracle(inst);
    done++;
  }
  CHECK(done >= 60);
}

TEST_CASE("gas variant oracle equivalence") {
  int done = 0;
  for (unsigned seed = 2000; seed < 2150 && done < 60; ++seed) {
    VrpInstance inst = random_cvrp_instance(Variant::GasCVRP, seed);
    if (!width_ok(inst))
      continue;
    check_against_oracle(inst);
    done++;
  }
  CHECK(done >= 60);
}

TEST_CASE("loadgas variant oracle equivalence") {
  int done = 0;
  for (unsigned seed = 3000; seed < 3150 && done < 60; ++seed) {
    VrpInstance inst = random_cvrp_instance(Variant::LoadGasCVRP, seed);
    if (!width_ok(inst))
      continue;
    check_against_oracle(inst);
    done++;
  }
  CHECK(done >= 60);
}

TEST_CASE("relaxed capacities agree with the uncapacitated dp") {
  for (unsigned seed = 4000; seed < 4030; ++seed) {
    VrpInstance base = random_vrp_instance({5, 7, 3, 2}, seed);
    VrpInstance relaxed = base;
    relaxed.variant = Variant::LoadGasCVRP;
    relaxed.load_cap = std::max<Weight>(1, static_cast<Weight>(base.clients.size()));
    std::map<Vertex, Weight> demands;
    for (Vertex c : base.clients)
      demands[c] = 1;
    relaxed.demands = demands;
    relaxed.gas_cap = 2 * base.total_edge_weight();
    auto vrp = solve_vrp_tw(base);
    CvrpResult cvrp = solve_cvrp_tw(relaxed, test_options());
    REQUIRE_FALSE(cvrp.stats.guard_hit);
    CHECK(vrp.has_value() == cvrp.solution.has_value());
    if (vrp && cvrp.solution)
      CHECK(vrp->weight == cvrp.solution->weight);
  }
}

TEST_CASE("reducible basics") {
  VrpInstance inst = star_instance(2);
  inst.variant = Variant::LoadGasCVRP;
  inst.load_cap = 3;
  inst.demands = std::map<Vertex, Weight>{{1, 1}, {2, 1}};
  inst.gas_cap = 8;
  CvrpParams params = make_cvrp_params(inst);

  CounterPair from;
  from.add({0, 1, 1, 2, false}, 2); // two (u,v,1,2)-walks
  CounterPair to;
  to.add({0, 0, 2, 4, false}, 1); // one (u,u,2,4)-walk
  CHECK(reducible(from, to, params));
  CHECK(reducible(from, from, params)); // identity merge
  CounterPair wrong;
  wrong.add({0, 0, 2, 5, false}, 1); // weight mismatch
  CHECK_FALSE(reducible(from, wrong, params));
  CounterPair depot_target;
  depot_target.add({0, 0, 2, 4, true}, 1); // no depot walk available
  CHECK_FALSE(reducible(from, depot_target, params));
}
