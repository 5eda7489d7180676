// Independent feasibility and objective check of solver output, written
// straight from the flow constraints.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vshare/mincost_solver.hpp"
#include "vshare/multicommodity_solver.hpp"
#include "vshare/trip_graph.hpp"

namespace vshare {

struct ValidationReport {
  std::vector<std::string> violations;
  std::int64_t recomputed_objective_micro = 0;

  bool ok() const { return violations.empty(); }
  std::string summary() const;  // first few violations, one per line
};

// Single type: conservation with depot balances, 0 <= x <= u, objective.
ValidationReport validate_flow(const FlowGraph& graph, const Flow& flow);

// Several types: per-type conservation away from the supra nodes, each
// fleet leaving its source and reaching its sink, joint capacities,
// non-negativity, barred arcs empty, objective.
ValidationReport validate_multiflow(const FlowGraph& graph, const MultiFlow& flow);

// Shared core: flows[k][arc] checked against the graph.
ValidationReport validate_flows(const FlowGraph& graph,
                                const std::vector<std::vector<std::int64_t>>& flows,
                                std::int64_t claimed_objective_micro);

}  // namespace vshare
