#include "vshare/validator.hpp"

#include <cmath>
#include <sstream>

namespace vshare {

std::string ValidationReport::summary() const {
  std::ostringstream out;
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) out << violations[i] << "\n";
  if (violations.size() > shown) out << "(" << violations.size() - shown << " more)\n";
  return out.str();
}

ValidationReport validate_flows(const FlowGraph& g,
                                const std::vector<std::vector<std::int64_t>>& x,
                                std::int64_t claimed) {
  ValidationReport r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };
  const int nk = g.num_commodities();
  const int na = g.num_arcs();
  if (static_cast<int>(x.size()) != nk) {
    fail("flow has " + std::to_string(x.size()) + " commodities, graph has " + std::to_string(nk));
    return r;
  }
  for (int k = 0; k < nk; ++k) {
    if (static_cast<int>(x[k].size()) != na) {
      fail("commodity " + std::to_string(k) + " flow is not sized like the arc list");
      return r;
    }
  }

  for (int a = 0; a < na; ++a) {
    const GraphArc& arc = g.arcs[a];
    std::int64_t total = 0;
    for (int k = 0; k < nk; ++k) {
      const std::int64_t v = x[k][a];
      if (v < 0) fail("negative flow on arc " + std::to_string(a));
      if (v != 0 && !arc.savings[k]) {
        fail("commodity " + std::to_string(k) + " uses barred arc " + std::to_string(a));
      }
      total += v;
      if (v != 0 && arc.savings[k]) {
        r.recomputed_objective_micro += v * std::llround(*arc.savings[k] * 1e6);
      }
    }
    if (total > arc.capacity) {
      fail("arc " + std::to_string(a) + " carries " + std::to_string(total) + " > capacity " +
           std::to_string(arc.capacity));
    }
  }

  std::vector<std::int64_t> net(g.num_nodes());
  for (int k = 0; k < nk; ++k) {
    std::fill(net.begin(), net.end(), 0);
    for (int a = 0; a < na; ++a) {
      net[g.arcs[a].head] += x[k][a];
      net[g.arcs[a].tail] -= x[k][a];
    }
    for (int i = 0; i < g.num_nodes(); ++i) {
      const NodeKind kind = g.nodes[i].kind;
      std::int64_t want = 0;
      if (!g.multi && (kind == NodeKind::kDepotStart || kind == NodeKind::kDepotEnd)) {
        want = g.balance[k][i];
      } else if (g.multi && (kind == NodeKind::kSupraSource || kind == NodeKind::kSupraSink) &&
                 g.nodes[i].commodity == k) {
        want = g.balance[k][i];
      }
      if (net[i] != want) {
        std::ostringstream msg;
        msg << "commodity " << k << " node " << i << " (" << node_kind_name(kind)
            << "): inflow - outflow = " << net[i] << ", expected " << want;
        fail(msg.str());
      }
    }
  }

  if (r.recomputed_objective_micro != claimed) {
    fail("objective " + std::to_string(claimed) + " differs from recomputed " +
         std::to_string(r.recomputed_objective_micro));
  }
  return r;
}

ValidationReport validate_flow(const FlowGraph& graph, const Flow& flow) {
  ValidationReport r;
  if (graph.multi || graph.num_commodities() != 1) {
    r.violations.push_back("single-type check needs a single-commodity graph");
    return r;
  }
  return validate_flows(graph, {flow.arc_flow}, flow.objective_micro);
}

ValidationReport validate_multiflow(const FlowGraph& graph, const MultiFlow& flow) {
  ValidationReport r;
  if (!graph.multi) {
    r.violations.push_back("multi-type check needs a multi-commodity graph");
    return r;
  }
  r = validate_flows(graph, flow.arc_flow, flow.objective_micro);
  if (flow.bound_micro < flow.objective_micro) r.violations.push_back("bound below incumbent");
  if (flow.status == SolveStatus::kOptimal && flow.bound_micro != flow.objective_micro) {
    r.violations.push_back("optimal result with a nonzero gap");
  }
  return r;
}

}  // namespace vshare
