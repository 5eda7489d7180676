#include "vshare/cost_model.hpp"
#include "vshare/trip_graph.hpp"

namespace vshare {

namespace {
constexpr double kLatenessTolerance = 1e-9;
}

std::optional<TripSchedule> schedule_trip(const Trip& trip, std::span<const Depot> depots,
                                          const MotParams& mot) {
  if (trip.tasks.empty()) return std::nullopt;
  const auto legs = leg_distances_km(trip, depots);
  TripSchedule s;
  s.start_min = trip.tasks.front().latest_arrival_min - leg_travel_time_min(legs[0], mot);
  double departure = 0.0;
  for (std::size_t i = 0; i < trip.tasks.size(); ++i) {
    const Task& q = trip.tasks[i];
    if (i > 0) {
      const double arrival = departure + leg_travel_time_min(legs[i], mot);
      if (arrival > q.latest_arrival_min + kLatenessTolerance) return std::nullopt;
    }
    departure = q.latest_arrival_min + q.duration_min;
  }
  s.end_min = departure + leg_travel_time_min(legs.back(), mot);
  return s;
}

}  // namespace vshare
