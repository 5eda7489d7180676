// Several vehicle types: integer multi-commodity flow solved exactly by
// branch-and-bound over per-type flow relaxations.
//
// Bounding relaxes the joint arc capacity and solves one min-cost flow per
// vehicle type. Lagrangian penalties on shared trip arcs (tuned by
// subgradient steps) tighten the bound; with zero iterations the bound is the
// plain decomposition. Branching picks the arc with the largest capacity
// violation and creates one child per type currently on the arc (that type
// forced on, the others off) plus one child where all of them are off.
// Nodes are explored best bound first with deterministic tie-breaks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <span>
#include <vector>

#include "vshare/mincost_solver.hpp"
#include "vshare/trip_graph.hpp"

namespace vshare {

enum class SolveStatus : std::uint8_t { kOptimal, kTimedOut, kNodeLimit };

std::string_view solve_status_name(SolveStatus s);

struct MultiFlow {
  std::vector<std::vector<std::int64_t>> arc_flow;  // [commodity][arc]
  std::int64_t objective_micro = 0;
  std::int64_t bound_micro = 0;  // proven upper bound on the optimum
  SolveStatus status = SolveStatus::kOptimal;
  std::int64_t nodes = 0;

  double objective() const;
  // Upper bound minus incumbent, in euros; 0 at proven optimality.
  double bound_gap() const;
};

// Partial assignment of (commodity, arc) pairs to forced values.
class ArcFixing {
 public:
  ArcFixing(int num_commodities, int num_arcs);

  ArcFix get(int commodity, int arc) const { return fix_[commodity][arc]; }
  void set(int commodity, int arc, ArcFix value) { fix_[commodity][arc] = value; }
  std::span<const ArcFix> commodity(int k) const { return fix_[k]; }

  // No arc is forced on for more commodities than its capacity.
  bool consistent(const FlowGraph& graph) const;

 private:
  std::vector<std::vector<ArcFix>> fix_;
};

struct RelaxationResult {
  std::int64_t bound_micro = 0;
  std::vector<CommodityFlow> flows;

  double bound() const;
};

// Sum of independent per-commodity optima under the fixings. Throws
// InfeasibleSupply when some commodity cannot route its fleet.
RelaxationResult relaxation_bound(const FlowGraph& graph, const ArcFixing& fixed);

struct BnBOptions {
  std::int64_t node_limit = 1'000'000;
  double time_limit_s = 120.0;
  int root_iterations = 200;  // subgradient steps at the root
  int node_iterations = 20;   // steps per node, warm-started from the root
  std::ostream* log = nullptr;  // one line per node: depth, bound, incumbent
  // Commodities with identical arcs and savings are solved as one pooled
  // flow whose routes are dealt back to the types.
  bool pool_identical = true;
  // Fix arcs whose reduced cost rules out any improvement over the incumbent.
  bool reduced_cost_fixing = true;
};

MultiFlow solve_multicommodity(const FlowGraph& graph, const BnBOptions& options = {});

}  // namespace vshare
