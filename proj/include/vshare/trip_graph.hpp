// Time-space DAG of trips, depots and (for several vehicle types)
// per-type supra-sources and sinks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "vshare/instance.hpp"
#include "vshare/mode.hpp"

namespace vshare {

// Departure from the origin depot and arrival back at the destination
// depot, in minutes since midnight.
struct TripSchedule {
  double start_min = 0.0;
  double end_min = 0.0;
};

// Departure is anchored so the first task is reached exactly at its latest
// arrival. A task starts at its latest arrival time; arriving earlier means
// waiting, arriving later makes the trip infeasible for this mode.
std::optional<TripSchedule> schedule_trip(const Trip& trip, std::span<const Depot> depots,
                                          const MotParams& mot);

enum class NodeKind : std::uint8_t {
  kDepotStart,
  kDepotEnd,
  kTripStart,
  kTripEnd,
  kSupraSource,
  kSupraSink,
};

enum class ArcKind : std::uint8_t {
  kTrip,
  kConnection,
  kDepotAccess,
  kDepotBypass,
  kSupra,
};

std::string_view node_kind_name(NodeKind k);
std::string_view arc_kind_name(ArcKind k);

struct GraphNode {
  NodeKind kind = NodeKind::kTripStart;
  int depot = -1;
  int trip = -1;
  int commodity = -1;  // set on per-type depot layers and supra nodes
};

struct GraphArc {
  int tail = 0;
  int head = 0;
  std::int64_t capacity = 0;
  bool unbounded = false;  // capacity holds the materialized bound
  ArcKind kind = ArcKind::kTrip;
  int trip = -1;
  // Savings in euros per commodity; nullopt bars the commodity from the arc.
  std::vector<std::optional<double>> savings;

  bool allows(int commodity) const { return savings[commodity].has_value(); }
};

// Vehicles of one type leaving a depot in the morning and required back in
// the evening.
struct DepotFleet {
  int start = 0;
  int end = 0;

  friend bool operator==(const DepotFleet&, const DepotFleet&) = default;
};

struct FlowGraph {
  bool multi = false;
  std::vector<Mode> commodities;
  std::vector<GraphNode> nodes;
  std::vector<GraphArc> arcs;
  // balance[k][i] = inflow - outflow required at node i for commodity k.
  std::vector<std::vector<std::int64_t>> balance;
  // Trip arc of each instance trip, -1 when the trip is not in the graph.
  std::vector<int> trip_arc;

  int num_commodities() const { return static_cast<int>(commodities.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_arcs() const { return static_cast<int>(arcs.size()); }
  int num_trip_arcs() const;

  // Units commodity k must route.
  std::int64_t supply(int commodity) const;

  // Kahn order; throws std::logic_error on a cycle.
  std::vector<int> topological_order() const;
  bool is_acyclic() const;
};

class GraphBuildError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Equal split of a fleet over depots, same count back at each depot.
std::vector<DepotFleet> equal_fleet(int total, int num_depots);

FlowGraph build_single_graph(const Instance& instance, Mode shared_mot,
                             std::span<const DepotFleet> fleet);

// fleet[k][d] is the fleet of shared_mots[k] at depot d.
FlowGraph build_multi_graph(const Instance& instance, std::span<const Mode> shared_mots,
                            std::span<const std::vector<DepotFleet>> fleet);

// Line-oriented text dump (one node or arc per line).
void write_graph_dump(const FlowGraph& graph, std::ostream& out);
FlowGraph read_graph_dump(std::istream& in);

}  // namespace vshare
