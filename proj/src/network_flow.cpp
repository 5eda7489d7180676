#include "vshare/network_flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace vshare {

namespace {
constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();
}

MinCostFlowNetwork::MinCostFlowNetwork(int num_nodes)
    : num_nodes_(num_nodes), supply_(num_nodes, 0) {}

int MinCostFlowNetwork::add_arc(int tail, int head, std::int64_t lower, std::int64_t capacity,
                                std::int64_t cost) {
  if (tail < 0 || tail >= num_nodes_ || head < 0 || head >= num_nodes_) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (lower < 0 || capacity < lower) throw std::invalid_argument("need 0 <= lower <= capacity");
  arcs_.push_back({tail, head, lower, capacity, cost});
  status_ = Status::kNotSolved;
  return static_cast<int>(arcs_.size()) - 1;
}

void MinCostFlowNetwork::set_supply(int node, std::int64_t supply) {
  supply_.at(node) = supply;
  status_ = Status::kNotSolved;
}

void MinCostFlowNetwork::build_residual() {
  source_ = num_nodes_;
  sink_ = num_nodes_ + 1;
  const int n = num_nodes_ + 2;

  std::vector<std::int64_t> excess = supply_;
  for (const Arc& a : arcs_) {
    excess[a.tail] -= a.lower;
    excess[a.head] += a.lower;
  }

  struct Pair {
    int from, to, arc;
    std::int64_t cap, cost;
  };
  std::vector<Pair> pairs;
  pairs.reserve(arcs_.size() + num_nodes_);
  for (int v = 0; v < num_nodes_; ++v) {
    if (excess[v] > 0) pairs.push_back({source_, v, -1, excess[v], 0});
  }
  for (int i = 0; i < static_cast<int>(arcs_.size()); ++i) {
    const Arc& a = arcs_[i];
    if (a.capacity > a.lower) pairs.push_back({a.tail, a.head, i, a.capacity - a.lower, a.cost});
  }
  for (int v = 0; v < num_nodes_; ++v) {
    if (excess[v] < 0) pairs.push_back({v, sink_, -1, -excess[v], 0});
  }

  std::vector<int> degree(n + 1, 0);
  for (const Pair& p : pairs) {
    ++degree[p.from];
    ++degree[p.to];
  }
  first_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) first_[v + 1] = first_[v] + degree[v];
  std::vector<int> cursor(first_.begin(), first_.end() - 1);
  edges_.assign(pairs.size() * 2, {});
  for (const Pair& p : pairs) {
    const int f = cursor[p.from]++;
    const int r = cursor[p.to]++;
    edges_[f] = {p.to, r, p.arc, p.cap, p.cost};
    edges_[r] = {p.from, f, p.arc, 0, -p.cost};
  }
}

bool MinCostFlowNetwork::initial_potentials() {
  const int n = num_nodes_ + 2;
  std::vector<int> indegree(n, 0);
  for (const Edge& e : edges_) {
    if (e.residual > 0) ++indegree[e.to];
  }
  std::vector<int> order;
  order.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) order.push_back(v);
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int u = order[pos];
    for (int i = first_[u]; i < first_[u + 1]; ++i) {
      if (edges_[i].residual > 0 && --indegree[edges_[i].to] == 0) order.push_back(edges_[i].to);
    }
  }
  if (static_cast<int>(order.size()) != n) return false;
  // Shortest distances from a virtual root joined to every node at cost 0.
  potential_.assign(n, 0);
  for (int u : order) {
    for (int i = first_[u]; i < first_[u + 1]; ++i) {
      const Edge& e = edges_[i];
      if (e.residual > 0) potential_[e.to] = std::min(potential_[e.to], potential_[u] + e.cost);
    }
  }
  return true;
}

MinCostFlowNetwork::Status MinCostFlowNetwork::solve() {
  build_residual();
  if (!initial_potentials()) throw std::logic_error("min-cost flow network is not acyclic");
  augmentations_ = 0;

  std::int64_t required = 0;
  for (int i = first_[source_]; i < first_[source_ + 1]; ++i) required += edges_[i].residual;

  const int n = num_nodes_ + 2;
  std::vector<std::int64_t> dist(n);
  std::vector<int> pred(n);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  status_ = Status::kOptimal;
  while (required > 0) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(pred.begin(), pred.end(), -1);
    dist[source_] = 0;
    heap.push({0, source_});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d != dist[u]) continue;
      for (int i = first_[u]; i < first_[u + 1]; ++i) {
        const Edge& e = edges_[i];
        if (e.residual <= 0) continue;
        const std::int64_t nd = d + e.cost + potential_[u] - potential_[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          pred[e.to] = i;
          heap.push({nd, e.to});
        }
      }
    }
    if (dist[sink_] == kUnreached) {
      status_ = Status::kInfeasible;
      break;
    }
    std::int64_t max_dist = 0;
    for (int v = 0; v < n; ++v) {
      if (dist[v] != kUnreached) max_dist = std::max(max_dist, dist[v]);
    }
    for (int v = 0; v < n; ++v) potential_[v] += dist[v] == kUnreached ? max_dist : dist[v];

    std::int64_t push = required;
    for (int v = sink_; v != source_;) {
      const Edge& e = edges_[pred[v]];
      push = std::min(push, e.residual);
      v = edges_[e.rev].to;
    }
    for (int v = sink_; v != source_;) {
      Edge& e = edges_[pred[v]];
      e.residual -= push;
      edges_[e.rev].residual += push;
      v = edges_[e.rev].to;
    }
    required -= push;
    ++augmentations_;
  }

  flow_.assign(arcs_.size(), 0);
  total_cost_ = 0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) flow_[i] = arcs_[i].lower;
  for (int u = 0; u < num_nodes_; ++u) {
    for (int i = first_[u]; i < first_[u + 1]; ++i) {
      const Edge& e = edges_[i];
      // Reverse edges of original arcs carry the pushed flow.
      if (e.arc >= 0 && arcs_[e.arc].head == u && e.to == arcs_[e.arc].tail) {
        flow_[e.arc] += e.residual;
      }
    }
  }
  for (std::size_t i = 0; i < arcs_.size(); ++i) total_cost_ += flow_[i] * arcs_[i].cost;
  return status_;
}

std::int64_t MinCostFlowNetwork::reduced_cost(int arc) const {
  const Arc& a = arcs_[arc];
  return a.cost + potential_[a.tail] - potential_[a.head];
}

bool MinCostFlowNetwork::check_reduced_cost_optimality() const {
  if (status_ != Status::kOptimal) return false;
  const int n = num_nodes_ + 2;
  for (int u = 0; u < n; ++u) {
    for (int i = first_[u]; i < first_[u + 1]; ++i) {
      const Edge& e = edges_[i];
      if (e.residual > 0 && e.cost + potential_[u] - potential_[e.to] < 0) return false;
    }
  }
  return true;
}

}  // namespace vshare
