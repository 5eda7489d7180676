#include "vshare/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "vshare/mincost_solver.hpp"

namespace vshare {

double OracleResult::objective() const { return static_cast<double>(objective_micro) / 1e6; }

namespace {

std::int64_t micro(double euros) { return std::llround(euros * 1e6); }

struct Vehicle {
  int commodity;
  int start_node;
  int at;  // current node
  std::vector<int> trips;
  std::int64_t path_micro = 0;
};

class Search {
 public:
  Search(const FlowGraph& g) : g_(g), nk_(g.num_commodities()) {
    arc_between_.resize(g.num_nodes());
    for (int a = 0; a < g.num_arcs(); ++a) arc_between_[g.arcs[a].tail][g.arcs[a].head] = a;

    std::vector<int> pos(g.num_nodes());
    const auto order = g.topological_order();
    for (int i = 0; i < g.num_nodes(); ++i) pos[order[i]] = i;
    for (int a = 0; a < g.num_arcs(); ++a) {
      if (g.arcs[a].kind == ArcKind::kTrip) trips_.push_back(a);
    }
    std::sort(trips_.begin(), trips_.end(),
              [&](int a, int b) { return pos[g.arcs[a].tail] < pos[g.arcs[b].tail]; });

    // Suffix sums of the best possible gain per remaining trip.
    rest_.assign(trips_.size() + 1, 0);
    for (int i = static_cast<int>(trips_.size()) - 1; i >= 0; --i) {
      std::int64_t best = 0;
      for (int k = 0; k < nk_; ++k) {
        const GraphArc& arc = g.arcs[trips_[i]];
        if (arc.allows(k)) best = std::max(best, micro(*arc.savings[k]));
      }
      rest_[i] = rest_[i + 1] + best;
    }
    // Other arcs carry no gain in generated graphs; slack_ keeps the bound
    // valid when a test graph puts savings on them.
    for (const GraphArc& arc : g.arcs) {
      if (arc.kind == ArcKind::kTrip) continue;
      for (int k = 0; k < nk_; ++k) {
        if (arc.allows(k)) {
          slack_ += arc.capacity * std::max<std::int64_t>(0, micro(*arc.savings[k]));
        }
      }
    }

    for (int v = 0; v < g.num_nodes(); ++v) {
      const GraphNode& n = g.nodes[v];
      if (n.kind != NodeKind::kDepotStart) continue;
      const std::int64_t count = starts_at(v);
      for (std::int64_t i = 0; i < count; ++i) {
        const int k = g.multi ? n.commodity : 0;
        vehicles_.push_back({k, v, v, {}, 0});
      }
    }
  }

  std::size_t num_vehicles() const { return vehicles_.size(); }

  std::optional<OracleResult> run() {
    dfs(0, 0);
    return best_;
  }

 private:
  std::int64_t starts_at(int node) const {
    if (!g_.multi) return -g_.balance[0][node];
    for (const GraphArc& a : g_.arcs) {
      if (a.kind == ArcKind::kSupra && a.head == node) return a.capacity;
    }
    return 0;
  }

  std::int64_t ends_at(int node) const {
    if (!g_.multi) return g_.balance[0][node];
    for (const GraphArc& a : g_.arcs) {
      if (a.kind == ArcKind::kSupra && a.tail == node) return a.capacity;
    }
    return 0;
  }

  int arc(int tail, int head) const {
    const auto it = arc_between_[tail].find(head);
    return it == arc_between_[tail].end() ? -1 : it->second;
  }

  void dfs(std::size_t i, std::int64_t value) {
    if (best_ && value + rest_[i] + slack_ <= best_->objective_micro) return;
    if (i == trips_.size()) {
      finish(value);
      return;
    }
    const GraphArc& trip = g_.arcs[trips_[i]];
    // Vehicles with the same type and position are interchangeable.
    std::vector<std::pair<int, int>> tried;
    for (Vehicle& v : vehicles_) {
      const int k = v.commodity;
      if (!trip.allows(k)) continue;
      const int link = arc(v.at, trip.tail);
      if (link < 0 || !g_.arcs[link].allows(k)) continue;
      const std::pair<int, int> key{k, v.at};
      if (std::find(tried.begin(), tried.end(), key) != tried.end()) continue;
      tried.push_back(key);

      const int prev = v.at;
      const std::int64_t gain = micro(*g_.arcs[link].savings[k]) + micro(*trip.savings[k]);
      v.at = trip.head;
      v.trips.push_back(trip.trip);
      dfs(i + 1, value + gain);
      v.trips.pop_back();
      v.at = prev;
    }
    dfs(i + 1, value);
  }

  void finish(std::int64_t value) {
    ++leaves_;
    std::map<int, std::int64_t> arrivals;
    std::int64_t total = value;
    std::vector<int> last(vehicles_.size());
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
      const Vehicle& v = vehicles_[j];
      int home = -1;
      for (int w = 0; w < g_.num_nodes(); ++w) {
        const GraphNode& n = g_.nodes[w];
        if (n.kind != NodeKind::kDepotEnd || (g_.multi && n.commodity != v.commodity)) continue;
        const int a = arc(v.at, w);
        if (a >= 0 && g_.arcs[a].allows(v.commodity)) {
          home = w;
          total += micro(*g_.arcs[a].savings[v.commodity]);
          break;
        }
      }
      if (home < 0) return;
      last[j] = home;
      ++arrivals[home];
    }
    for (int w = 0; w < g_.num_nodes(); ++w) {
      if (g_.nodes[w].kind != NodeKind::kDepotEnd) continue;
      if (arrivals[w] != ends_at(w)) return;
    }
    if (g_.multi) {
      // Supra arcs carry no gain in generated graphs but count if present.
      for (int a = 0; a < g_.num_arcs(); ++a) {
        const GraphArc& arc = g_.arcs[a];
        if (arc.kind != ArcKind::kSupra) continue;
        for (int k = 0; k < nk_; ++k) {
          if (arc.allows(k)) total += arc.capacity * micro(*arc.savings[k]);
        }
      }
    }
    if (best_ && total <= best_->objective_micro) return;
    OracleResult r;
    r.objective_micro = total;
    r.assignment.assign(g_.trip_arc.size(), -1);
    for (std::size_t j = 0; j < vehicles_.size(); ++j) {
      const Vehicle& v = vehicles_[j];
      OracleRoute route;
      route.commodity = v.commodity;
      route.start_depot = g_.nodes[v.start_node].depot;
      route.end_depot = g_.nodes[last[j]].depot;
      route.trips = v.trips;
      for (int t : v.trips) r.assignment[t] = v.commodity;
      r.routes.push_back(std::move(route));
    }
    best_ = std::move(r);
  }

  const FlowGraph& g_;
  int nk_;
  std::vector<std::map<int, int>> arc_between_;
  std::vector<int> trips_;
  std::vector<std::int64_t> rest_;
  std::int64_t slack_ = 0;
  std::vector<Vehicle> vehicles_;
  std::optional<OracleResult> best_;
  std::int64_t leaves_ = 0;

 public:
  std::int64_t leaves() const { return leaves_; }
};

}  // namespace

OracleResult oracle_solve(const FlowGraph& graph, const OracleLimits& limits) {
  if (graph.num_trip_arcs() > limits.max_trip_arcs) {
    throw TooLarge("oracle: " + std::to_string(graph.num_trip_arcs()) + " trip arcs exceed " +
                   std::to_string(limits.max_trip_arcs));
  }
  Search search(graph);
  if (static_cast<int>(search.num_vehicles()) > limits.max_vehicles) {
    throw TooLarge("oracle: " + std::to_string(search.num_vehicles()) + " vehicles exceed " +
                   std::to_string(limits.max_vehicles));
  }
  auto best = search.run();
  if (!best) throw InfeasibleSupply("oracle: no assignment returns every vehicle");
  best->leaves = search.leaves();
  return *best;
}

}  // namespace vshare
