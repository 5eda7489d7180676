#include "vshare/cost_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vshare/trip_graph.hpp"

namespace vshare {

double Cost::value() const {
  if (kind_ != Kind::kFinite) throw std::logic_error("value() of an infinite cost");
  return value_;
}

Cost operator+(Cost a, Cost b) {
  if (a.is_finite() && b.is_finite()) return Cost(a.value_ + b.value_);
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw std::logic_error("inf + -inf is undefined");
  }
  return a.is_finite() ? b : a;
}

Cost operator-(Cost a, Cost b) {
  if (b.is_pos_inf()) return a + Cost::negative_infinity();
  if (b.is_neg_inf()) return a + Cost::infinity();
  return a + Cost(-b.value_);
}

std::partial_ordering operator<=>(const Cost& a, const Cost& b) {
  auto rank = [](const Cost& c) {
    return c.is_neg_inf() ? 0 : c.is_finite() ? 1 : 2;
  };
  if (a.is_finite() && b.is_finite()) return a.value_ <=> b.value_;
  return rank(a) <=> rank(b);
}

bool operator==(const Cost& a, const Cost& b) { return (a <=> b) == 0; }

std::string Cost::to_string() const {
  if (is_pos_inf()) return "+inf";
  if (is_neg_inf()) return "-inf";
  std::ostringstream ss;
  ss << value_;
  return ss.str();
}

Cost min(Cost a, Cost b) { return b < a ? b : a; }

double sloped_distance(double aerial_km, const MotParams& mot) {
  return aerial_km * mot.sloping_factor;
}

double leg_travel_time_min(double aerial_km, const MotParams& mot) {
  return sloped_distance(aerial_km, mot) / mot.avg_speed_kmh * 60.0 + mot.setup_time_min;
}

LegCost leg_cost(double aerial_km, const MotParams& mot, const CostConfig& cfg) {
  const double d = sloped_distance(aerial_km, mot);
  LegCost c;
  c.distance_eur = d * mot.cost_per_km;
  c.travel_time_h = d / mot.avg_speed_kmh + mot.setup_time_min / 60.0;
  c.time_eur = c.travel_time_h * cfg.cost_per_time_eur_per_h;
  c.emissions_eur = d * mot.emissions_g_per_km * 1e-6 * cfg.co2_cost_eur_per_tonne;
  return c;
}

double legs_cost(std::span<const double> legs_km, const MotParams& mot, const CostConfig& cfg) {
  double sum = 0.0;
  for (double km : legs_km) sum += leg_cost(km, mot, cfg).objective_value(cfg.objective);
  return sum;
}

Cost trip_cost(const Trip& trip, std::span<const Depot> depots, const MotParams& mot,
               const CostConfig& cfg) {
  if (!trip.allowed_mots.contains(mot.mode)) return Cost::infinity();
  if (!schedule_trip(trip, depots, mot)) return Cost::infinity();
  const auto legs = leg_distances_km(trip, depots);
  return Cost(legs_cost(legs, mot, cfg));
}

BaselineChoice baseline_cost(const Trip& trip, std::span<const Depot> depots,
                             std::span<const MotParams> baseline_mots,
                             const MotParams& fallback, const CostConfig& cfg) {
  // The alternative a user would actually take is the cheapest one in full
  // cost; the objective then prices that choice.
  CostConfig full = cfg;
  full.objective = Objective::kBase;
  Cost best = Cost::infinity();
  const MotParams* chosen = nullptr;
  for (const MotParams& mot : baseline_mots) {
    const Cost c = trip_cost(trip, depots, mot, full);
    if (c < best) {
      best = c;
      chosen = &mot;
    }
  }
  if (chosen) {
    const Cost c = cfg.objective == Objective::kBase ? best : trip_cost(trip, depots, *chosen, cfg);
    return {chosen->mode, c.value()};
  }
  const auto legs = leg_distances_km(trip, depots);
  return {fallback.mode, legs_cost(legs, fallback, cfg)};
}

Cost trip_savings(const Trip& trip, std::span<const Depot> depots, const MotParams& shared_mot,
                  std::span<const MotParams> baseline_mots, const MotParams& fallback,
                  const CostConfig& cfg) {
  const Cost shared = trip_cost(trip, depots, shared_mot, cfg);
  if (!shared.is_finite()) return Cost::negative_infinity();
  const BaselineChoice base = baseline_cost(trip, depots, baseline_mots, fallback, cfg);
  return Cost(base.cost) - shared;
}

std::vector<MotParams> default_baseline_mots(const MotTable& table) {
  return {table[Mode::kPublicTransport], table[Mode::kBike], table[Mode::kTaxi]};
}

std::int64_t to_micro(double euros) { return std::llround(euros * 1e6); }

double from_micro(std::int64_t micro) { return static_cast<double>(micro) / 1e6; }

}  // namespace vshare
