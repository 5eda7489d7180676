#include "doctest.h"
#include "test_util.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/mincost_solver.hpp"
#include "vshare/multicommodity_solver.hpp"
#include "vshare/oracle.hpp"
#include "vshare/trip_graph.hpp"

using namespace vshare;
using vshare::testing::InstanceBuilder;

namespace {

// Five trips between two depots: a morning and afternoon pair out of depot 0,
// one crossing trip and a late trip at depot 1.
Instance five_trips() {
  return InstanceBuilder({{0, 0}, {6, 0}})
      .trip(0, 0, {{2, 2, 540, 60}})
      .trip(0, 1, {{3, 1, 600, 45}})
      .trip(1, 1, {{7, 2, 560, 30}})
      .trip(0, 0, {{1, 3, 840, 60}})
      .trip(1, 0, {{4, 2, 780, 90}})
      .build();
}

void randomize(FlowGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  for (GraphArc& a : g.arcs) {
    if (a.kind != ArcKind::kTrip) continue;
    for (auto& s : a.savings) {
      if (s) *s = rng.uniform(-3.0, 10.0);
    }
  }
}

}  // namespace

TEST_CASE("trivial graphs") {
  const Instance empty = InstanceBuilder({{0, 0}}).build();
  const FlowGraph g0 = build_single_graph(empty, Mode::kCarType1, equal_fleet(2, 1));
  CHECK(oracle_solve(g0).objective_micro == 0);

  const Instance one = InstanceBuilder({{0, 0}}).trip(0, 0, {{4, 3, 600, 60}}).build();
  FlowGraph g1 = build_single_graph(one, Mode::kCarType1, equal_fleet(1, 1));
  *g1.arcs[g1.trip_arc[0]].savings[0] = 5.0;
  const OracleResult r = oracle_solve(g1);
  CHECK(r.objective() == doctest::Approx(5.0));
  CHECK(r.assignment == std::vector<int>{0});
  REQUIRE(r.routes.size() == 1);
  CHECK(r.routes[0].trips == std::vector<int>{0});
}

TEST_CASE("single type: oracle agrees with the flow solver") {
  const Instance in = five_trips();
  for (int m : {2, 4}) {
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
      FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(m, 2));
      randomize(g, seed);
      const OracleResult ref = oracle_solve(g);
      const Flow f = solve_min_cost_flow(g);
      CHECK(f.objective_micro == ref.objective_micro);
    }
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SmallInstanceConfig sc;
    sc.num_trips = 7;
    const Instance small = random_small_instance(seed, sc);
    const FlowGraph g = build_single_graph(small, Mode::kCarType2, equal_fleet(4, 2));
    CHECK(solve_min_cost_flow(g).objective_micro == oracle_solve(g).objective_micro);
  }
}

TEST_CASE("multi type: oracle agrees with branch-and-bound") {
  const std::vector<Mode> cars = {Mode::kCarType1, Mode::kCarType2};
  const std::vector<std::vector<DepotFleet>> fleet(2, equal_fleet(2, 2));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SmallInstanceConfig sc;
    sc.num_trips = 6;
    sc.restrict_prob = 0.3;
    const Instance in = random_small_instance(seed, sc);
    FlowGraph g = build_multi_graph(in, cars, fleet);
    if (seed % 2 == 0) randomize(g, seed);
    const OracleResult ref = oracle_solve(g);
    const MultiFlow f = solve_multicommodity(g);
    CHECK(f.status == SolveStatus::kOptimal);
    CHECK(f.objective_micro == ref.objective_micro);
  }
}

TEST_CASE("oracle routes match its assignment") {
  const Instance in = five_trips();
  FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(2, 2));
  randomize(g, 77);
  const OracleResult r = oracle_solve(g);
  std::vector<int> seen(in.trips.size(), -1);
  std::int64_t total = 0;
  for (const OracleRoute& route : r.routes) {
    for (int t : route.trips) {
      CHECK(seen[t] == -1);
      seen[t] = route.commodity;
      total += arc_savings_micro(g.arcs[g.trip_arc[t]], route.commodity);
    }
  }
  CHECK(seen == r.assignment);
  CHECK(total == r.objective_micro);
  CHECK(r.leaves > 0);
}

TEST_CASE("size guards") {
  SmallInstanceConfig sc;
  sc.num_trips = 13;
  const Instance in = random_small_instance(1, sc);
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(2, 2));
  CHECK_THROWS_AS(oracle_solve(g), TooLarge);
  const FlowGraph many = build_single_graph(five_trips(), Mode::kCarType1, equal_fleet(8, 2));
  CHECK_THROWS_AS(oracle_solve(many), TooLarge);
}
