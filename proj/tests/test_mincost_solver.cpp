#include <algorithm>

#include "doctest.h"
#include "test_util.hpp"
#include "vshare/cost_model.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/mincost_solver.hpp"
#include "vshare/network_flow.hpp"
#include "vshare/trip_graph.hpp"
#include "vshare/validator.hpp"

using namespace vshare;
using vshare::testing::InstanceBuilder;

namespace {

void set_trip_savings(FlowGraph& g, int trip, double s) { *g.arcs[g.trip_arc[trip]].savings[0] = s; }

FlowGraph chain_graph(double s0, double s1, int vehicles) {
  const Instance in = InstanceBuilder({{0, 0}})
                          .trip(0, 0, {{4, 0, 500, 60}})
                          .trip(0, 0, {{0, 4, 700, 60}})
                          .build();
  FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(vehicles, 1));
  set_trip_savings(g, 0, s0);
  set_trip_savings(g, 1, s1);
  return g;
}

}  // namespace

TEST_CASE("network flow basics") {
  SUBCASE("cheapest of two parallel paths") {
    MinCostFlowNetwork net(4);
    net.add_arc(0, 1, 0, 1, 1);
    net.add_arc(0, 2, 0, 2, 3);
    net.add_arc(1, 3, 0, 2, 1);
    net.add_arc(2, 3, 0, 2, 1);
    net.set_supply(0, 2);
    net.set_supply(3, -2);
    REQUIRE(net.solve() == MinCostFlowNetwork::Status::kOptimal);
    CHECK(net.total_cost() == 2 + 4);
    CHECK(net.flow(0) == 1);
    CHECK(net.flow(1) == 1);
    CHECK(net.check_reduced_cost_optimality());
  }
  SUBCASE("lower bounds are honoured") {
    MinCostFlowNetwork net(3);
    net.add_arc(0, 1, 0, 5, 0);
    net.add_arc(0, 2, 1, 5, 10);
    net.add_arc(1, 2, 0, 5, 0);
    net.set_supply(0, 2);
    net.set_supply(2, -2);
    REQUIRE(net.solve() == MinCostFlowNetwork::Status::kOptimal);
    CHECK(net.flow(1) == 1);
    CHECK(net.total_cost() == 10);
  }
  SUBCASE("negative costs on a DAG") {
    MinCostFlowNetwork net(3);
    net.add_arc(0, 1, 0, 1, -7);
    net.add_arc(1, 2, 0, 1, -2);
    net.add_arc(0, 2, 0, 3, 0);
    net.set_supply(0, 2);
    net.set_supply(2, -2);
    REQUIRE(net.solve() == MinCostFlowNetwork::Status::kOptimal);
    CHECK(net.total_cost() == -9);
  }
  SUBCASE("infeasible supply") {
    MinCostFlowNetwork net(2);
    net.add_arc(0, 1, 0, 1, 0);
    net.set_supply(0, 2);
    net.set_supply(1, -2);
    CHECK(net.solve() == MinCostFlowNetwork::Status::kInfeasible);
  }
  SUBCASE("cycles are rejected") {
    MinCostFlowNetwork net(2);
    net.add_arc(0, 1, 0, 1, 0);
    net.add_arc(1, 0, 0, 1, 0);
    CHECK_THROWS_AS(net.solve(), std::logic_error);
  }
}

TEST_CASE("one vehicle chains two trips") {
  const FlowGraph g = chain_graph(5.0, 3.0, 1);
  const Flow f = solve_min_cost_flow(g);
  CHECK(f.objective() == doctest::Approx(8.0));
  CHECK(f.certified);
  const auto routes = extract_routes(g, f.arc_flow);
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].trips == std::vector<int>{0, 1});
  const RouteStats st = route_stats(routes);
  CHECK(st.used_vehicles == 1);
  CHECK(st.trips_per_used_vehicle == 2.0);
}

TEST_CASE("negative savings leave the cars parked") {
  const FlowGraph g = chain_graph(-1.0, -0.5, 2);
  const Flow f = solve_min_cost_flow(g);
  CHECK(f.objective_micro == 0);
  for (int a = 0; a < g.num_arcs(); ++a) {
    if (f.arc_flow[a] > 0) CHECK(g.arcs[a].kind == ArcKind::kDepotBypass);
  }
  const auto routes = extract_routes(g, f.arc_flow);
  CHECK(routes.size() == 2);
  for (const auto& r : routes) CHECK(r.trips.empty());
  CHECK(route_stats(routes).trips_per_used_vehicle == 0.0);
}

TEST_CASE("one route and one parked car") {
  const FlowGraph g = chain_graph(5.0, 3.0, 2);
  const Flow f = solve_min_cost_flow(g);
  const auto routes = extract_routes(g, f.arc_flow);
  REQUIRE(routes.size() == 2);
  const RouteStats st = route_stats(routes);
  CHECK(st.used_vehicles == 1);
  CHECK(st.trips == 2);
  CHECK(st.trips_per_used_vehicle == 2.0);
}

TEST_CASE("decomposition rejects broken flows") {
  const FlowGraph g = chain_graph(5.0, 3.0, 1);
  std::vector<std::int64_t> x(g.num_arcs(), 0);
  x[g.trip_arc[0]] = 1;
  CHECK_THROWS_AS(extract_routes(g, x), DecompositionFailure);
}

TEST_CASE("generated instances: validity, certificate, objective readout") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance in = generate_instance(seed, 80);
    const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(8, 2));
    const Flow f = solve_min_cost_flow(g);
    CHECK(f.certified);
    CHECK(validate_flow(g, f).ok());
    std::int64_t from_trips = 0;
    for (int a = 0; a < g.num_arcs(); ++a) {
      if (g.arcs[a].kind == ArcKind::kTrip) {
        from_trips += f.arc_flow[a] * arc_savings_micro(g.arcs[a], 0);
      }
    }
    CHECK(from_trips == f.objective_micro);
    CHECK(extract_routes(g, f.arc_flow).size() == 8);
  }
}

TEST_CASE("dropping non-positive trips keeps the optimum") {
  const Instance in = generate_instance(9, 60);
  FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(6, 2));
  const std::int64_t full = solve_min_cost_flow(g).objective_micro;
  FlowGraph pruned = g;
  std::vector<GraphArc> kept;
  for (const GraphArc& a : pruned.arcs) {
    if (a.kind == ArcKind::kTrip && arc_savings_micro(a, 0) <= 0) continue;
    kept.push_back(a);
  }
  pruned.arcs = kept;
  std::fill(pruned.trip_arc.begin(), pruned.trip_arc.end(), -1);
  CHECK(solve_min_cost_flow(pruned).objective_micro == full);
}

TEST_CASE("more vehicles never lose savings") {
  const Instance in = generate_instance(4, 100);
  std::int64_t prev = -1;
  for (int m : {2, 4, 8, 20, 40, 80}) {
    const FlowGraph g = build_single_graph(in, Mode::kCarType2, equal_fleet(m, 2));
    const std::int64_t obj = solve_min_cost_flow(g).objective_micro;
    CHECK(obj >= prev);
    prev = obj;
  }
}

TEST_CASE("single-graph solve requires one commodity") {
  const Instance in = generate_instance(1, 5);
  const std::vector<Mode> modes = {Mode::kCarType1, Mode::kCarType2};
  const std::vector<std::vector<DepotFleet>> fleet(2, equal_fleet(2, 2));
  CHECK_THROWS_AS(solve_min_cost_flow(build_multi_graph(in, modes, fleet)), std::invalid_argument);
}
