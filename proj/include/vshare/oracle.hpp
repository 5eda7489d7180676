// Exhaustive search over vehicle routes for tiny graphs; the reference the
// flow solvers are checked against.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vshare/trip_graph.hpp"

namespace vshare {

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleLimits {
  int max_trip_arcs = 12;
  int max_vehicles = 6;
};

struct OracleRoute {
  int commodity = 0;
  int start_depot = -1;
  int end_depot = -1;
  std::vector<int> trips;  // instance trip ids in visiting order
};

struct OracleResult {
  std::int64_t objective_micro = 0;
  // Per instance trip: covering commodity, or -1 when unassigned.
  std::vector<int> assignment;
  std::vector<OracleRoute> routes;
  std::int64_t leaves = 0;  // complete assignments examined

  double objective() const;
};

// Tries every way of dealing the trips to the vehicles in time order,
// checking arc availability per commodity and the evening depot counts.
// Throws TooLarge beyond the limits and InfeasibleSupply (from
// mincost_solver.hpp) when no assignment returns the fleets correctly.
OracleResult oracle_solve(const FlowGraph& graph, const OracleLimits& limits = {});

}  // namespace vshare
