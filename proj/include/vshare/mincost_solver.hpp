// Single vehicle type: maximum-savings integral flow on the trip graph.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vshare/trip_graph.hpp"

namespace vshare {

struct Flow {
  std::vector<std::int64_t> arc_flow;  // x_ij, indexed like graph.arcs
  std::int64_t objective_micro = 0;    // sum s_ij x_ij in micro-euros
  bool certified = false;              // reduced-cost optimality verified

  double objective() const;
};

class InfeasibleSupply : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecompositionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer savings of an arc for a commodity (the solver's exact domain).
std::int64_t arc_savings_micro(const GraphArc& arc, int commodity);

// Per (commodity, arc) restriction used by branch-and-bound.
enum class ArcFix : std::uint8_t { kFree, kZero, kOne };

struct CommodityFlow {
  std::vector<std::int64_t> arc_flow;
  std::int64_t objective_micro = 0;  // true savings
  std::int64_t adjusted_micro = 0;   // savings minus penalties
  bool certified = false;
  // Reduced cost (negated adjusted savings) per graph arc; any feasible
  // flow that moves one unit onto an idle arc, or off a used unit-capacity
  // arc, loses at least |reduced_cost| of adjusted savings. Filled only when
  // certified; 0 for arcs outside the commodity's network.
  std::vector<std::int64_t> reduced_cost;
};

// Best flow of one commodity on its own sub-network. fix and penalty are
// either empty or sized like graph.arcs; penalty is subtracted from the
// savings of every arc the commodity uses. nullopt when the restrictions
// leave no feasible flow.
std::optional<CommodityFlow> solve_commodity(const FlowGraph& graph, int commodity,
                                             std::span<const ArcFix> fix = {},
                                             std::span<const std::int64_t> penalty = {});

// Requires a graph with exactly one commodity. Throws InfeasibleSupply when
// the depot supplies cannot be routed.
Flow solve_min_cost_flow(const FlowGraph& graph);

struct VehicleRoute {
  int commodity = 0;
  int start_depot = -1;
  int end_depot = -1;
  std::vector<int> trips;  // instance trip ids in visiting order
  std::vector<int> arcs;
};

// Splits a commodity's flow into unit depot-to-depot paths; vehicles left on
// a bypass arc give routes without trips.
std::vector<VehicleRoute> extract_routes(const FlowGraph& graph,
                                         std::span<const std::int64_t> arc_flow,
                                         int commodity = 0);

struct RouteStats {
  int vehicles = 0;
  int used_vehicles = 0;
  int trips = 0;
  // Trips per vehicle that covers at least one trip; 0 with no used vehicle.
  double trips_per_used_vehicle = 0.0;
};

RouteStats route_stats(std::span<const VehicleRoute> routes);

}  // namespace vshare
