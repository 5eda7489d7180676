#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "vshare/cost_model.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/mincost_solver.hpp"
#include "vshare/trip_graph.hpp"

using namespace vshare;
using vshare::testing::InstanceBuilder;
using vshare::testing::without;

namespace {

const MotTable kTable = MotTable::defaults();

int count_kind(const FlowGraph& g, ArcKind k) {
  return static_cast<int>(
      std::count_if(g.arcs.begin(), g.arcs.end(), [k](const GraphArc& a) { return a.kind == k; }));
}

// Five trips over two depots in the style of the introductory figure:
// morning and afternoon trips that chain at their depots.
Instance five_trips() {
  return InstanceBuilder({{0, 0}, {8, 0}})
      .trip(0, 0, {{3, 0, 480, 60}})
      .trip(0, 1, {{5, 3, 500, 90}})
      .trip(1, 1, {{10, 2, 470, 45}})
      .trip(0, 0, {{2, 2, 720, 60}})
      .trip(1, 0, {{6, -2, 780, 30}})
      .build();
}

}  // namespace

TEST_CASE("schedule anchors the first task at its latest arrival") {
  // 12 km aerial each way: 15.6 km at 30 km/h plus 10 min setup = 41.2 min.
  const Instance in = InstanceBuilder({{0, 0}}).trip(0, 0, {{12, 0, 600, 60}}).build();
  const auto s = schedule_trip(in.trips[0], in.depots, kTable[Mode::kCarType1]);
  REQUIRE(s);
  CHECK(s->start_min == doctest::Approx(558.8));
  CHECK(s->end_min == doctest::Approx(701.2));
}

TEST_CASE("schedule with waiting and lateness") {
  const Instance in = InstanceBuilder({{0, 0}, {6, 8}})
                          .trip(0, 1, {{3, 4, 540, 60}, {9, 4, 660, 30}})
                          .build();
  const Trip& t = in.trips[0];
  // Reference values from tests/oracles/cost_reference.py.
  const auto car = schedule_trip(t, in.depots, kTable[Mode::kCarType1]);
  REQUIRE(car);
  CHECK(car->start_min == doctest::Approx(517.0));
  CHECK(car->end_min == doctest::Approx(713.0));
  const auto pt = schedule_trip(t, in.depots, kTable[Mode::kPublicTransport]);
  REQUIRE(pt);
  CHECK(pt->start_min == doctest::Approx(512.5));
  CHECK(pt->end_min == doctest::Approx(717.5));
  CHECK_FALSE(schedule_trip(t, in.depots, kTable[Mode::kWalk]));
}

TEST_CASE("zero-duration task next to the depot") {
  const Instance in = InstanceBuilder({{1, 1}}).trip(0, 0, {{1, 1, 700, 0}}).build();
  const auto s = schedule_trip(in.trips[0], in.depots, kTable[Mode::kCarType2]);
  REQUIRE(s);
  CHECK(s->end_min == doctest::Approx(710.0));
}

TEST_CASE("single graph structure") {
  const Instance in = five_trips();
  const std::vector<DepotFleet> fleet = {{2, 2}, {1, 1}};
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, fleet);
  CHECK_FALSE(g.multi);
  CHECK(g.num_nodes() == 2 + 2 * 5 + 2);
  CHECK(g.num_trip_arcs() == 5);
  CHECK(count_kind(g, ArcKind::kDepotAccess) == 10);
  CHECK(count_kind(g, ArcKind::kDepotBypass) == 2);
  CHECK(count_kind(g, ArcKind::kSupra) == 0);
  CHECK(g.is_acyclic());
  CHECK(g.supply(0) == 3);
  CHECK(g.balance[0][0] == -2);
  CHECK(g.balance[0][1] == -1);
  CHECK(g.nodes[0].kind == NodeKind::kDepotStart);
  CHECK(g.nodes[g.num_nodes() - 1].kind == NodeKind::kDepotEnd);

  // By hand: trip 0 is back at depot 0 (557.8) before trip 3 leaves it
  // (702.6); trips 1 and 2 are back at depot 1 (611.0, 532.4) before trip 4
  // leaves it (762.6). No other pair shares a depot.
  std::vector<std::pair<int, int>> links;
  for (const GraphArc& a : g.arcs) {
    if (a.kind == ArcKind::kConnection) links.emplace_back(g.nodes[a.tail].trip, g.nodes[a.head].trip);
  }
  std::sort(links.begin(), links.end());
  const std::vector<std::pair<int, int>> expected = {{0, 3}, {1, 4}, {2, 4}};
  CHECK(links == expected);

  for (const GraphArc& a : g.arcs) {
    if (a.kind == ArcKind::kDepotBypass) {
      CHECK(a.unbounded);
      CHECK(a.capacity == 3);
      CHECK(*a.savings[0] == 0.0);
    } else {
      CHECK(a.capacity == 1);
    }
  }
}

TEST_CASE("trip arc savings match the cost model") {
  const Instance in = generate_instance(11, 30);
  const FlowGraph g = build_single_graph(in, Mode::kCarType2, equal_fleet(4, 2));
  const auto baselines = default_baseline_mots(kTable);
  for (const Trip& t : in.trips) {
    const int a = g.trip_arc[t.id];
    REQUIRE(a >= 0);
    const Cost s = trip_savings(t, in.depots, kTable[Mode::kCarType2], baselines,
                                kTable[Mode::kTaxi], in.cost_config);
    CHECK(*g.arcs[a].savings[0] == doctest::Approx(s.value()).epsilon(1e-12));
  }
}

TEST_CASE("connections never go back in time") {
  const Instance in = generate_instance(5, 60);
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(8, 2));
  CHECK(g.is_acyclic());
  const MotParams& car = kTable[Mode::kCarType1];
  int connections = 0;
  for (const GraphArc& a : g.arcs) {
    if (a.kind != ArcKind::kConnection) continue;
    ++connections;
    const Trip& from = in.trips[g.nodes[a.tail].trip];
    const Trip& to = in.trips[g.nodes[a.head].trip];
    CHECK(from.dest_depot == to.origin_depot);
    CHECK(schedule_trip(from, in.depots, car)->end_min <=
          schedule_trip(to, in.depots, car)->start_min);
  }
  CHECK(connections > 0);
}

TEST_CASE("empty instance") {
  const Instance in = InstanceBuilder({{0, 0}, {5, 5}}).build();
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(4, 2));
  CHECK(g.num_arcs() == 2);
  CHECK(count_kind(g, ArcKind::kDepotBypass) == 2);
  CHECK(solve_min_cost_flow(g).objective_micro == 0);
}

TEST_CASE("two chained trips give one connection") {
  const Instance in = InstanceBuilder({{0, 0}})
                          .trip(0, 0, {{4, 0, 500, 60}})
                          .trip(0, 0, {{0, 4, 700, 60}})
                          .build();
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(1, 1));
  CHECK(count_kind(g, ArcKind::kConnection) == 1);
}

TEST_CASE("unusable trips are left out") {
  const Instance in = InstanceBuilder({{0, 0}})
                          .trip(0, 0, {{4, 0, 500, 60}}, without({Mode::kCarType1}))
                          .trip(0, 0, {{0, 4, 700, 60}})
                          .build();
  const FlowGraph g = build_single_graph(in, Mode::kCarType1, equal_fleet(2, 1));
  CHECK(g.num_trip_arcs() == 1);
  CHECK(g.trip_arc[0] == -1);
  CHECK(g.trip_arc[1] >= 0);
}

TEST_CASE("fleet checks") {
  const Instance in = five_trips();
  const std::vector<DepotFleet> unbalanced = {{2, 1}, {1, 1}};
  CHECK_THROWS_AS(build_single_graph(in, Mode::kCarType1, unbalanced), GraphBuildError);
  CHECK_THROWS_AS(build_single_graph(in, Mode::kTaxi, equal_fleet(2, 2)), GraphBuildError);
  CHECK_THROWS_AS(equal_fleet(5, 2), GraphBuildError);
  CHECK(equal_fleet(8, 2) == std::vector<DepotFleet>{{4, 4}, {4, 4}});
}

TEST_CASE("multi graph supra arcs") {
  const Instance in = five_trips();
  const std::vector<Mode> modes = {Mode::kCarType1, Mode::kCarType2};
  const std::vector<std::vector<DepotFleet>> fleet = {{{2, 2}, {1, 1}}, {{3, 3}, {4, 4}}};
  const FlowGraph g = build_multi_graph(in, modes, fleet);
  CHECK(g.multi);
  CHECK(g.is_acyclic());
  CHECK(g.supply(0) == 3);
  CHECK(g.supply(1) == 7);
  // 2 supra sources, 4 start layers, 10 trip nodes, 4 end layers, 2 sinks.
  CHECK(g.num_nodes() == 22);
  std::vector<std::int64_t> caps[2];
  for (const GraphArc& a : g.arcs) {
    if (a.kind != ArcKind::kSupra || g.nodes[a.tail].kind != NodeKind::kSupraSource) continue;
    const int k = g.nodes[a.tail].commodity;
    CHECK(a.allows(k));
    CHECK_FALSE(a.allows(1 - k));
    caps[k].push_back(a.capacity);
  }
  CHECK(caps[0] == std::vector<std::int64_t>{2, 1});
  CHECK(caps[1] == std::vector<std::int64_t>{3, 4});
  for (int k = 0; k < 2; ++k) {
    CHECK(std::count_if(g.nodes.begin(), g.nodes.end(), [k](const GraphNode& n) {
            return n.kind == NodeKind::kSupraSource && n.commodity == k;
          }) == 1);
  }
}

TEST_CASE("multi graph bars a commodity per trip") {
  const Instance in = InstanceBuilder({{0, 0}})
                          .trip(0, 0, {{4, 0, 500, 60}}, without({Mode::kCarType2}))
                          .trip(0, 0, {{0, 4, 700, 60}})
                          .build();
  const std::vector<Mode> modes = {Mode::kCarType1, Mode::kCarType2};
  const std::vector<std::vector<DepotFleet>> fleet(2, equal_fleet(1, 1));
  const FlowGraph g = build_multi_graph(in, modes, fleet);
  const GraphArc& t0 = g.arcs[g.trip_arc[0]];
  CHECK(t0.allows(0));
  CHECK_FALSE(t0.allows(1));
  const GraphArc& t1 = g.arcs[g.trip_arc[1]];
  CHECK(t1.allows(0));
  CHECK(t1.allows(1));
}

TEST_CASE("graph dump round trip") {
  const Instance in = generate_instance(2, 15);
  const std::vector<Mode> modes = {Mode::kCarType1, Mode::kCarType2};
  const std::vector<std::vector<DepotFleet>> fleet(2, equal_fleet(4, 2));
  for (const FlowGraph& g : {build_single_graph(in, Mode::kCarType1, equal_fleet(4, 2)),
                             build_multi_graph(in, modes, fleet)}) {
    std::stringstream ss;
    write_graph_dump(g, ss);
    const FlowGraph back = read_graph_dump(ss);
    CHECK(back.multi == g.multi);
    CHECK(back.commodities == g.commodities);
    CHECK(back.balance == g.balance);
    CHECK(back.trip_arc == g.trip_arc);
    REQUIRE(back.num_arcs() == g.num_arcs());
    for (int a = 0; a < g.num_arcs(); ++a) {
      CHECK(back.arcs[a].tail == g.arcs[a].tail);
      CHECK(back.arcs[a].capacity == g.arcs[a].capacity);
      CHECK(back.arcs[a].kind == g.arcs[a].kind);
      CHECK(back.arcs[a].savings == g.arcs[a].savings);
    }
  }
}
