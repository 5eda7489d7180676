// Leg, trip and baseline costs per mode of transport, and trip savings.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vshare/instance.hpp"
#include "vshare/mode.hpp"

namespace vshare {

// Euro amount extended with explicit +inf / -inf markers. Infinities never
// come out of floating point arithmetic: every operation on them is
// short-circuited.
class Cost {
 public:
  constexpr Cost() = default;
  constexpr explicit Cost(double euros) : value_(euros) {}

  static constexpr Cost infinity() { return Cost(Kind::kPosInf); }
  static constexpr Cost negative_infinity() { return Cost(Kind::kNegInf); }

  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  bool is_neg_inf() const { return kind_ == Kind::kNegInf; }

  // Throws std::logic_error on an infinite value.
  double value() const;

  friend Cost operator+(Cost a, Cost b);
  // -inf for finite - (+inf), +inf for (+inf) - finite. inf - inf throws.
  friend Cost operator-(Cost a, Cost b);
  friend std::partial_ordering operator<=>(const Cost& a, const Cost& b);
  friend bool operator==(const Cost& a, const Cost& b);

  std::string to_string() const;

 private:
  enum class Kind : std::uint8_t { kFinite, kPosInf, kNegInf };
  constexpr explicit Cost(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

Cost min(Cost a, Cost b);

// Absolute comparison tolerance for euro amounts.
inline constexpr double kEuroTolerance = 1e-9;

struct LegCost {
  double distance_eur = 0.0;
  double time_eur = 0.0;
  double emissions_eur = 0.0;
  double travel_time_h = 0.0;

  double total() const { return distance_eur + time_eur + emissions_eur; }
  // The value a leg contributes to the optimization objective.
  double objective_value(Objective objective) const {
    return objective == Objective::kTimeOnly ? time_eur : total();
  }
};

double sloped_distance(double aerial_km, const MotParams& mot);

// Travel time including the per-leg setup time.
double leg_travel_time_min(double aerial_km, const MotParams& mot);

LegCost leg_cost(double aerial_km, const MotParams& mot, const CostConfig& cfg);

// Objective value of a leg sequence, ignoring mode restrictions and
// schedule feasibility.
double legs_cost(std::span<const double> legs_km, const MotParams& mot,
                 const CostConfig& cfg);

// Cost of the whole trip under cfg.objective. +inf when the mode is not in
// the trip's allowed set or cannot meet the task deadlines.
Cost trip_cost(const Trip& trip, std::span<const Depot> depots, const MotParams& mot,
               const CostConfig& cfg);

// The non-shared alternative with the lowest full cost, priced under
// cfg.objective. When every alternative is +inf the fallback (taxi) is used
// without restriction checks.
struct BaselineChoice {
  Mode mode = Mode::kTaxi;
  double cost = 0.0;
};

BaselineChoice baseline_cost(const Trip& trip, std::span<const Depot> depots,
                             std::span<const MotParams> baseline_mots,
                             const MotParams& fallback, const CostConfig& cfg);

// Savings of riding the trip with the shared mode instead of the cheapest
// baseline. -inf when the shared mode is not usable for the trip.
Cost trip_savings(const Trip& trip, std::span<const Depot> depots, const MotParams& shared_mot,
                  std::span<const MotParams> baseline_mots, const MotParams& fallback,
                  const CostConfig& cfg);

// Public transport, bike and taxi rows of the table. Walk is not a baseline.
std::vector<MotParams> default_baseline_mots(const MotTable& table);

// Conversions to the solvers' integer micro-euro domain (round half away
// from zero).
std::int64_t to_micro(double euros);
double from_micro(std::int64_t micro);

}  // namespace vshare
