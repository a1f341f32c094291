#include <doctest.h>

#include "test_helpers.hpp"
#include "twvrp/oracle.hpp"

using namespace twvrp;
using namespace twvrp::testing;

TEST_CASE("oracle_vrp on the triangle") {
  CHECK(oracle_vrp(triangle_instance()) == 3);
}

TEST_CASE("oracle_vrp star needs each edge twice") {
  CHECK(oracle_vrp(star_instance(1)) == 4);
  CHECK(oracle_vrp(star_instance(2)) == 4);
}

TEST_CASE("oracle_vrp unreachable client is infeasible") {
  VrpInstance inst = make_instance(3, {{0, 1, 1}}, {0}, {2}, 1);
  CHECK_FALSE(oracle_vrp(inst).has_value());
}

TEST_CASE("oracle_vrp respects edge capacities") {
  // EVRP: path 0-1 with kappa = 1 cannot host a closed walk through 1
  VrpInstance inst = make_instance(2, {{0, 1, 1}}, {0}, {1}, 1, Variant::EVRP);
  inst.edge_caps = std::vector<Weight>{1};
  CHECK_FALSE(oracle_vrp(inst).has_value());
  inst.edge_caps = std::vector<Weight>{2};
  CHECK(oracle_vrp(inst) == 2);
}

TEST_CASE("oracle_vrp size guard") {
  VrpInstance big = make_instance(2, {{0, 1, 1, 16}}, {0}, {1}, 1);
  CHECK_THROWS_AS(oracle_vrp(big), ScaleGuardError);
}

TEST_CASE("oracle_cvrp load example") {
  VrpInstance inst = star_instance(2);
  inst.variant = Variant::LoadCVRP;
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{{1, 1}, {2, 1}};
  CHECK(oracle_cvrp(inst) == 4);
  inst.k = 1;
  CHECK_FALSE(oracle_cvrp(inst).has_value());
}

TEST_CASE("oracle_cvrp gas example") {
  VrpInstance inst = star_instance(2);
  inst.variant = Variant::GasCVRP;
  inst.gas_cap = 2;
  CHECK(oracle_cvrp(inst) == 4); // two out-and-back walks
  inst.k = 1;
  CHECK_FALSE(oracle_cvrp(inst).has_value());
  inst.k = 2;
  inst.gas_cap = 1;
  CHECK_FALSE(oracle_cvrp(inst).has_value());
}

TEST_CASE("oracle equivalence between vrp and relaxed cvrp") {
  for (unsigned seed = 0; seed < 60; ++seed) {
    VrpInstance inst = random_vrp_instance({}, seed);
    if (static_cast<int>(inst.clients.size()) > 6 || inst.k > 3)
      continue;
    auto vrp = oracle_vrp(inst);
    VrpInstance relaxed = inst;
    relaxed.variant = Variant::LoadGasCVRP;
    relaxed.load_cap = std::max<Weight>(1, static_cast<Weight>(inst.clients.size()));
    std::map<Vertex, Weight> demands;
    for (Vertex c : inst.clients)
      demands[c] = 1;
    relaxed.demands = demands;
    relaxed.gas_cap = 2 * inst.total_edge_weight() + 1;
    auto cvrp = oracle_cvrp(relaxed);
    CHECK(vrp == cvrp);
  }
}
