#include "vshare/mincost_solver.hpp"

#include <string>

#include "vshare/cost_model.hpp"
#include "vshare/network_flow.hpp"

namespace vshare {

double Flow::objective() const { return from_micro(objective_micro); }

std::int64_t arc_savings_micro(const GraphArc& arc, int commodity) {
  return to_micro(*arc.savings[commodity]);
}

std::optional<CommodityFlow> solve_commodity(const FlowGraph& graph, int commodity,
                                             std::span<const ArcFix> fix,
                                             std::span<const std::int64_t> penalty) {
  const int na = graph.num_arcs();
  MinCostFlowNetwork net(graph.num_nodes());
  for (int v = 0; v < graph.num_nodes(); ++v) {
    const std::int64_t b = graph.balance[commodity][v];
    if (b != 0) net.set_supply(v, -b);
  }
  std::vector<int> net_arc(na, -1);
  for (int i = 0; i < na; ++i) {
    const GraphArc& a = graph.arcs[i];
    if (!a.allows(commodity)) continue;
    const ArcFix f = fix.empty() ? ArcFix::kFree : fix[i];
    if (f == ArcFix::kZero) continue;
    const std::int64_t s = arc_savings_micro(a, commodity) - (penalty.empty() ? 0 : penalty[i]);
    const std::int64_t lower = f == ArcFix::kOne ? 1 : 0;
    if (lower > a.capacity) return std::nullopt;
    net_arc[i] = net.add_arc(a.tail, a.head, lower, a.capacity, -s);
  }
  if (net.solve() != MinCostFlowNetwork::Status::kOptimal) return std::nullopt;

  CommodityFlow out;
  out.arc_flow.assign(na, 0);
  out.adjusted_micro = -net.total_cost();
  for (int i = 0; i < na; ++i) {
    if (net_arc[i] < 0) continue;
    const std::int64_t x = net.flow(net_arc[i]);
    out.arc_flow[i] = x;
    if (x != 0) out.objective_micro += x * arc_savings_micro(graph.arcs[i], commodity);
  }
  out.certified = net.check_reduced_cost_optimality();
  if (out.certified) {
    out.reduced_cost.assign(na, 0);
    for (int i = 0; i < na; ++i) {
      if (net_arc[i] >= 0) out.reduced_cost[i] = net.reduced_cost(net_arc[i]);
    }
  }
  return out;
}

Flow solve_min_cost_flow(const FlowGraph& graph) {
  if (graph.num_commodities() != 1) {
    throw std::invalid_argument("solve_min_cost_flow needs a single-commodity graph");
  }
  auto result = solve_commodity(graph, 0);
  if (!result) throw InfeasibleSupply("depot supplies cannot be routed");
  Flow f;
  f.arc_flow = std::move(result->arc_flow);
  f.objective_micro = result->objective_micro;
  f.certified = result->certified;
  return f;
}

std::vector<VehicleRoute> extract_routes(const FlowGraph& graph,
                                         std::span<const std::int64_t> arc_flow, int commodity) {
  const int nn = graph.num_nodes();
  std::vector<std::vector<int>> out(nn);
  std::vector<std::int64_t> left(arc_flow.begin(), arc_flow.end());
  for (int i = 0; i < graph.num_arcs(); ++i) {
    if (left[i] < 0) throw DecompositionFailure("negative arc flow");
    if (left[i] > 0) out[graph.arcs[i].tail].push_back(i);
  }
  std::vector<std::size_t> cursor(nn, 0);

  auto is_start = [&](int v) {
    const GraphNode& n = graph.nodes[v];
    return n.kind == NodeKind::kDepotStart && (!graph.multi || n.commodity == commodity);
  };

  std::vector<VehicleRoute> routes;
  for (int s = 0; s < nn; ++s) {
    if (!is_start(s)) continue;
    std::int64_t units = 0;
    for (int a : out[s]) units += left[a];
    for (std::int64_t u = 0; u < units; ++u) {
      VehicleRoute r;
      r.commodity = commodity;
      r.start_depot = graph.nodes[s].depot;
      int v = s;
      while (graph.nodes[v].kind != NodeKind::kDepotEnd) {
        while (cursor[v] < out[v].size() && left[out[v][cursor[v]]] == 0) ++cursor[v];
        if (cursor[v] == out[v].size()) {
          throw DecompositionFailure("flow stops at node " + std::to_string(v));
        }
        const int a = out[v][cursor[v]];
        --left[a];
        r.arcs.push_back(a);
        if (graph.arcs[a].kind == ArcKind::kTrip) r.trips.push_back(graph.arcs[a].trip);
        v = graph.arcs[a].head;
        if (r.arcs.size() > static_cast<std::size_t>(graph.num_arcs())) {
          throw DecompositionFailure("flow contains a cycle");
        }
      }
      r.end_depot = graph.nodes[v].depot;
      routes.push_back(std::move(r));
    }
  }
  if (static_cast<std::int64_t>(routes.size()) != graph.supply(commodity)) {
    throw DecompositionFailure("route count differs from the fleet size");
  }
  for (int i = 0; i < graph.num_arcs(); ++i) {
    const ArcKind k = graph.arcs[i].kind;
    if (left[i] != 0 && k != ArcKind::kSupra) {
      throw DecompositionFailure("flow left on arc " + std::to_string(i));
    }
  }
  return routes;
}

RouteStats route_stats(std::span<const VehicleRoute> routes) {
  RouteStats s;
  s.vehicles = static_cast<int>(routes.size());
  for (const VehicleRoute& r : routes) {
    if (!r.trips.empty()) {
      ++s.used_vehicles;
      s.trips += static_cast<int>(r.trips.size());
    }
  }
  if (s.used_vehicles > 0) s.trips_per_used_vehicle = double(s.trips) / s.used_vehicles;
  return s;
}

}  // namespace vshare
