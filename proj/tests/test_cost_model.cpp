#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "vshare/cost_model.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/trip_graph.hpp"

using namespace vshare;
using vshare::testing::InstanceBuilder;

namespace {

const MotTable kTable = MotTable::defaults();
const CostConfig kBase{};
const CostConfig kTime{19.42, 5.0, Objective::kTimeOnly};

// Depots (0,0) and (6,8); stops 5, 6 and 5 km apart.
Instance reference_trip(ModeSet modes = ModeSet::all()) {
  return InstanceBuilder({{0, 0}, {6, 8}})
      .trip(0, 1, {{3, 4, 540, 60}, {9, 4, 660, 30}}, modes)
      .build();
}

}  // namespace

TEST_CASE("parameter table defaults") {
  CHECK(kTable[Mode::kWalk].sloping_factor == 1.1);
  CHECK(kTable[Mode::kPublicTransport].sloping_factor == 1.5);
  CHECK(kTable[Mode::kCarType1].emissions_g_per_km == 200.9);
  CHECK(kTable[Mode::kCarType2].cost_per_km == 0.094);
  CHECK(kTable[Mode::kTaxi].cost_per_km == 1.2);
  CHECK(kTable[Mode::kBike].setup_time_min == 2.0);
  const auto shared = kTable.shared_modes();
  REQUIRE(shared.size() == 2);
  CHECK(shared[0] == Mode::kCarType1);
  CHECK(shared[1] == Mode::kCarType2);
}

TEST_CASE("sloped distance") {
  CHECK(sloped_distance(10.0, kTable[Mode::kCarType1]) == doctest::Approx(13.0));
  CHECK(sloped_distance(0.0, kTable[Mode::kBike]) == 0.0);
  CHECK(sloped_distance(1.0, kTable[Mode::kWalk]) == doctest::Approx(1.1));
}

TEST_CASE("leg cost components") {
  const LegCost car = leg_cost(10.0, kTable[Mode::kCarType1], kBase);
  CHECK(car.distance_eur == doctest::Approx(2.444).epsilon(1e-12));
  CHECK(car.travel_time_h == doctest::Approx(0.6));
  CHECK(car.time_eur == doctest::Approx(11.652));
  CHECK(car.emissions_eur == doctest::Approx(0.0130585));
  CHECK(car.total() == doctest::Approx(14.1090585));

  const LegCost walk = leg_cost(1.0, kTable[Mode::kWalk], kBase);
  CHECK(walk.distance_eur == 0.0);
  CHECK(walk.time_eur == doctest::Approx(4.2724));
  CHECK(walk.emissions_eur == 0.0);

  const LegCost bike = leg_cost(0.0, kTable[Mode::kBike], kBase);
  CHECK(bike.distance_eur == 0.0);
  CHECK(bike.time_eur == doctest::Approx(2.0 / 60.0 * 19.42));
  CHECK(bike.total() == doctest::Approx(0.647333333));
}

TEST_CASE("time-only objective keeps the components") {
  const LegCost car = leg_cost(10.0, kTable[Mode::kCarType1], kTime);
  CHECK(car.objective_value(Objective::kTimeOnly) == doctest::Approx(11.652));
  CHECK(car.objective_value(Objective::kBase) == doctest::Approx(14.1090585));
}

TEST_CASE("trip cost against the exact-rational reference") {
  // Values from tests/oracles/cost_reference.py.
  const Instance in = reference_trip();
  const Trip& t = in.trips[0];
  auto cost = [&](Mode m, const CostConfig& cfg) {
    return trip_cost(t, in.depots, kTable[m], cfg).value();
  };
  CHECK(cost(Mode::kCarType1, kBase) == doctest::Approx(27.105826933).epsilon(1e-9));
  CHECK(cost(Mode::kCarType2, kBase) == doctest::Approx(25.134174133).epsilon(1e-9));
  CHECK(cost(Mode::kPublicTransport, kBase) == doctest::Approx(28.159).epsilon(1e-9));
  CHECK(cost(Mode::kBike, kBase) == doctest::Approx(27.188).epsilon(1e-9));
  CHECK(cost(Mode::kTaxi, kBase) == doctest::Approx(43.300426933).epsilon(1e-9));
  CHECK(cost(Mode::kCarType1, kTime) == doctest::Approx(23.174533333).epsilon(1e-9));
  // Walking misses the second deadline.
  CHECK(trip_cost(t, in.depots, kTable[Mode::kWalk], kBase).is_pos_inf());

  const auto baselines = default_baseline_mots(kTable);
  const BaselineChoice b = baseline_cost(t, in.depots, baselines, kTable[Mode::kTaxi], kBase);
  CHECK(b.mode == Mode::kBike);
  CHECK(b.cost == doctest::Approx(27.188));
  const Cost s1 = trip_savings(t, in.depots, kTable[Mode::kCarType1], baselines,
                               kTable[Mode::kTaxi], kBase);
  const Cost s2 = trip_savings(t, in.depots, kTable[Mode::kCarType2], baselines,
                               kTable[Mode::kTaxi], kBase);
  CHECK(s1.value() == doctest::Approx(0.082173067).epsilon(1e-6));
  CHECK(s2.value() == doctest::Approx(2.053825867).epsilon(1e-9));
}

TEST_CASE("two identical 10 km legs") {
  const Instance in = InstanceBuilder({{0, 0}}).trip(0, 0, {{10, 0, 600, 60}}).build();
  CHECK(trip_cost(in.trips[0], in.depots, kTable[Mode::kCarType1], kBase).value() ==
        doctest::Approx(28.218117));
}

TEST_CASE("degenerate geometry pays setup only") {
  const Instance in = InstanceBuilder({{2, 2}}).trip(0, 0, {{2, 2, 600, 0}}).build();
  CHECK(trip_cost(in.trips[0], in.depots, kTable[Mode::kCarType1], kBase).value() ==
        doctest::Approx(2 * 10.0 / 60.0 * 19.42));
}

TEST_CASE("time-only baseline is priced for the cheapest full-cost mode") {
  const Instance in = reference_trip();
  const auto baselines = default_baseline_mots(kTable);
  const BaselineChoice b = baseline_cost(in.trips[0], in.depots, baselines, kTable[Mode::kTaxi], kTime);
  CHECK(b.mode == Mode::kBike);
  CHECK(b.cost == doctest::Approx(27.188));
}

TEST_CASE("excluded modes") {
  const auto baselines = default_baseline_mots(kTable);
  SUBCASE("shared mode excluded gives -inf savings") {
    const Instance in = reference_trip(vshare::testing::without({Mode::kCarType1}));
    const Trip& t = in.trips[0];
    CHECK(trip_cost(t, in.depots, kTable[Mode::kCarType1], kBase).is_pos_inf());
    CHECK(trip_savings(t, in.depots, kTable[Mode::kCarType1], baselines, kTable[Mode::kTaxi], kBase)
              .is_neg_inf());
    CHECK(trip_savings(t, in.depots, kTable[Mode::kCarType2], baselines, kTable[Mode::kTaxi], kBase)
              .is_finite());
  }
  SUBCASE("cars-only user falls back on taxi") {
    const Instance in = reference_trip({Mode::kCarType1, Mode::kCarType2});
    const BaselineChoice b =
        baseline_cost(in.trips[0], in.depots, baselines, kTable[Mode::kTaxi], kBase);
    CHECK(b.mode == Mode::kTaxi);
    CHECK(b.cost == doctest::Approx(43.300426933));
  }
}

TEST_CASE("extended cost arithmetic") {
  const Cost inf = Cost::infinity();
  const Cost ninf = Cost::negative_infinity();
  CHECK((Cost(3) + inf).is_pos_inf());
  CHECK((Cost(3) - inf).is_neg_inf());
  CHECK((inf - Cost(3)).is_pos_inf());
  CHECK(Cost(3) < inf);
  CHECK(ninf < Cost(-1e300));
  CHECK(min(inf, Cost(2)).value() == 2.0);
  CHECK_THROWS_AS(inf - inf, std::logic_error);
  CHECK_THROWS_AS(inf.value(), std::logic_error);
  CHECK((Cost(20.0) - Cost(14.109)).value() == doctest::Approx(5.891));
}

TEST_CASE("leg cost is affine in distance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> km(0.0, 30.0);
  for (const MotParams& mot : kTable.rows()) {
    const double setup = leg_cost(0.0, mot, kBase).total();
    for (int i = 0; i < 50; ++i) {
      const double a = km(rng), b = km(rng);
      CHECK(leg_cost(a + b, mot, kBase).total() + setup ==
            doctest::Approx(leg_cost(a, mot, kBase).total() + leg_cost(b, mot, kBase).total()));
      CHECK(leg_cost(a, mot, kBase).total() >= 0.0);
    }
  }
}

TEST_CASE("car type ordering per leg") {
  for (double km : {0.0, 0.5, 3.0, 12.0, 40.0}) {
    const LegCost c1 = leg_cost(km, kTable[Mode::kCarType1], kBase);
    const LegCost c2 = leg_cost(km, kTable[Mode::kCarType2], kBase);
    CHECK(c2.total() <= c1.total());
    CHECK(c1.objective_value(Objective::kTimeOnly) == c2.objective_value(Objective::kTimeOnly));
  }
}

TEST_CASE("savings move against the shared cost and with the baseline") {
  const Instance in = reference_trip();
  const auto baselines = default_baseline_mots(kTable);
  auto rows = kTable.rows();
  const double s0 = trip_savings(in.trips[0], in.depots, rows[mode_index(Mode::kCarType1)],
                                 baselines, kTable[Mode::kTaxi], kBase)
                        .value();
  MotParams dear = rows[mode_index(Mode::kCarType1)];
  dear.cost_per_km += 0.5;
  const double s1 =
      trip_savings(in.trips[0], in.depots, dear, baselines, kTable[Mode::kTaxi], kBase).value();
  CHECK(s1 < s0);
  std::vector<MotParams> slower = baselines;
  for (MotParams& m : slower) m.avg_speed_kmh *= 0.5;
  const double s2 = trip_savings(in.trips[0], in.depots, rows[mode_index(Mode::kCarType1)], slower,
                                 kTable[Mode::kTaxi], kBase)
                        .value();
  CHECK(s2 > s0);
}

TEST_CASE("electric savings dominate on generated trips") {
  const Instance in = generate_instance(3, 40);
  const auto baselines = default_baseline_mots(kTable);
  for (const Trip& t : in.trips) {
    const Cost c = trip_savings(t, in.depots, kTable[Mode::kCarType1], baselines,
                                kTable[Mode::kTaxi], kBase);
    const Cost e = trip_savings(t, in.depots, kTable[Mode::kCarType2], baselines,
                                kTable[Mode::kTaxi], kBase);
    REQUIRE(c.is_finite());
    CHECK(e.value() >= c.value());
  }
}

TEST_CASE("parameter validation") {
  auto rows = kTable.rows();
  rows[0].sloping_factor = 0.9;
  CHECK_THROWS_AS(MotTable{rows}, InvalidParameters);
  rows = kTable.rows();
  rows[1].avg_speed_kmh = 0.0;
  CHECK_THROWS_AS(MotTable{rows}, InvalidParameters);
  rows = kTable.rows();
  rows[2].cost_per_km = -1.0;
  CHECK_THROWS_AS(MotTable{rows}, InvalidParameters);
  CHECK_THROWS(validate(CostConfig{-1.0, 5.0, Objective::kBase}));
}

TEST_CASE("parameter table JSON") {
  const std::string text = serialize_mot_table(kTable);
  CHECK(parse_mot_table(text) == kTable);
  CHECK(text.find("\"speed_kmh\"") != std::string::npos);
  CHECK(text.find("\"setup_min\"") != std::string::npos);
}

TEST_CASE("micro-euro rounding") {
  CHECK(to_micro(1.0000005) == 1000001);
  CHECK(to_micro(-1.0000005) == -1000001);
  CHECK(from_micro(2500000) == 2.5);
}
