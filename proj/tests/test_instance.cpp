#include <doctest.h>

#include "test_helpers.hpp"
#include "twvrp/json_io.hpp"

using namespace twvrp;
using namespace twvrp::testing;

TEST_CASE("parse smallest triangle instance") {
  std::string doc = R"({
    "n": 3,
    "edges": [[0,1,1],[0,2,1],[1,2,1]],
    "depots": [0,1,2],
    "clients": [0,1,2],
    "k": 1,
    "variant": "VRP",
    "r": 3
  })";
  VrpInstance inst = parse_instance(doc);
  CHECK(inst.graph.n == 3);
  CHECK(inst.graph.edges.size() == 3);
  CHECK(inst.k == 1);
  CHECK(inst.variant == Variant::VRP);
  CHECK(inst.weight_bound == 3);
}

TEST_CASE("demands forbidden for VRP") {
  std::string doc = R"({
    "n": 2, "edges": [[0,1,1]], "depots": [0], "clients": [1],
    "k": 1, "variant": "VRP", "demands": {"1": 1}
  })";
  CHECK_THROWS_WITH_AS(parse_instance(doc), doctest::Contains("demands"), ValidationError);
}

TEST_CASE("zero demand rejected") {
  std::string doc = R"({
    "n": 2, "edges": [[0,1,1]], "depots": [0], "clients": [1],
    "k": 1, "variant": "LoadCVRP", "ell": 2, "demands": {"1": 0}
  })";
  CHECK_THROWS_WITH_AS(parse_instance(doc), doctest::Contains("demand must be positive"),
                       ValidationError);
}

TEST_CASE("out of range vertex id names the field") {
  std::string doc = R"({
    "n": 2, "edges": [[0,5,1]], "depots": [0], "clients": [],
    "k": 1, "variant": "VRP"
  })";
  CHECK_THROWS_WITH_AS(parse_instance(doc), doctest::Contains("edges[0]"), ValidationError);
}

TEST_CASE("parse after emit is the identity") {
  VrpInstance inst = make_instance(4, {{0, 1, 2}, {1, 2, 0}, {2, 3, 5, 2}}, {0}, {2, 3}, 2,
                                   Variant::LoadCVRP);
  inst.load_cap = 3;
  (*inst.demands)[2] = 2;
  inst.weight_bound = 14;
  inst.validate();
  std::string text = emit_instance(inst);
  VrpInstance again = parse_instance(text);
  CHECK(emit_instance(again) == text);
  CHECK(again.graph.edges[2].mult == 2);
  CHECK(again.demand_of(2) == 2);
}

TEST_CASE("verify unit triangle walk") {
  VrpInstance inst = triangle_instance();
  Routing routing;
  routing.walks.push_back({{0, 1, 2, 0}, {0, 2, 1}});
  routing.assignment = {{0, 0}, {1, 0}, {2, 0}};
  auto report = verify_routing(inst, routing);
  CHECK(report.feasible);
  CHECK(report.total_weight == 3);
}

TEST_CASE("load violation reported") {
  VrpInstance inst = star_instance(1);
  inst.variant = Variant::LoadCVRP;
  inst.load_cap = 1;
  inst.demands = std::map<Vertex, Weight>{{1, 1}, {2, 1}};
  Routing routing;
  routing.walks.push_back({{0, 1, 0, 2, 0}, {0, 0, 1, 1}});
  routing.assignment = {{1, 0}, {2, 0}};
  auto report = verify_routing(inst, routing);
  CHECK_FALSE(report.feasible);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0] == "load exceeded on walk 0");
}

TEST_CASE("gas violation reported") {
  VrpInstance inst = star_instance(1);
  inst.variant = Variant::GasCVRP;
  inst.gas_cap = 3;
  Routing routing;
  routing.walks.push_back({{0, 1, 0, 2, 0}, {0, 0, 1, 1}});
  routing.assignment = {{1, 0}, {2, 0}};
  auto report = verify_routing(inst, routing);
  CHECK_FALSE(report.feasible);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0] == "gas exceeded on walk 0");
}

TEST_CASE("strict zero-length service switch") {
  VrpInstance inst = make_instance(2, {{0, 1, 1}}, {0}, {0}, 1);
  Routing routing;
  Walk w;
  w.vertices = {0};
  routing.walks.push_back(w);
  routing.assignment = {{0, 0}};
  CHECK(verify_routing(inst, routing).feasible);
  VerifyOptions strict;
  strict.strict_zero_length_service = true;
  CHECK_FALSE(verify_routing(inst, routing, strict).feasible);
}

TEST_CASE("routing document round trip") {
  VrpInstance inst = triangle_instance();
  Routing routing;
  routing.walks.push_back({{0, 1, 2, 0}, {0, 2, 1}});
  routing.assignment = {{0, 0}, {1, 0}, {2, 0}};
  std::string text = emit_routing(routing);
  Routing again = parse_routing(text, inst);
  CHECK(emit_routing(again) == text);
  // plain vertex-array walks resolve edges when unambiguous
  Routing plain = parse_routing(R"({"walks": [[0,1,2,0]], "assignment": {"0":0,"1":0,"2":0}})",
                                inst);
  CHECK(plain.walks[0].edge_ids == std::vector<int>{0, 2, 1});
}

TEST_CASE("contract zero edges merges clients") {
  // path a-b-c with w(a,b) = 0, both a and b clients
  VrpInstance inst = make_instance(3, {{0, 1, 0}, {1, 2, 1}}, {2}, {0, 1}, 1);
  ContractResult res = contract_zero_edges(inst);
  CHECK(res.instance.graph.n == 2);
  REQUIRE(res.instance.graph.edges.size() == 1);
  CHECK(res.instance.graph.edges[0].w == 1);
  CHECK(res.instance.clients.size() == 1);
  CHECK(res.old_to_new[0] == res.old_to_new[1]);
}

TEST_CASE("contract without zero edges is the identity") {
  VrpInstance inst = triangle_instance();
  ContractResult res = contract_zero_edges(inst);
  CHECK(res.instance.graph.n == 3);
  CHECK(res.instance.graph.edges.size() == 3);
  CHECK(res.instance.clients == inst.clients);
}

TEST_CASE("contract rejects load variants") {
  VrpInstance inst = make_instance(2, {{0, 1, 0}}, {0}, {1}, 1, Variant::LoadCVRP);
  CHECK_THROWS_AS(contract_zero_edges(inst), ValidationError);
}
