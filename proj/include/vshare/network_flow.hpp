// Integral min-cost flow by successive shortest augmenting paths with node
// potentials. Arcs carry lower and upper bounds; the arc network must be
// acyclic so initial potentials come from one topological sweep.

#pragma once

#include <cstdint>
#include <vector>

namespace vshare {

class MinCostFlowNetwork {
 public:
  enum class Status { kNotSolved, kOptimal, kInfeasible };

  explicit MinCostFlowNetwork(int num_nodes);

  int add_arc(int tail, int head, std::int64_t lower, std::int64_t capacity, std::int64_t cost);
  // supply = outflow - inflow required at the node.
  void set_supply(int node, std::int64_t supply);

  Status solve();

  Status status() const { return status_; }
  std::int64_t flow(int arc) const { return flow_[arc]; }
  const std::vector<std::int64_t>& flows() const { return flow_; }
  std::int64_t total_cost() const { return total_cost_; }
  int num_augmentations() const { return augmentations_; }

  // Reduced-cost optimality: with the final potentials every residual arc
  // has non-negative reduced cost.
  bool check_reduced_cost_optimality() const;
  const std::vector<std::int64_t>& potentials() const { return potential_; }
  // cost + potential(tail) - potential(head) under the final potentials.
  std::int64_t reduced_cost(int arc) const;

 private:
  struct Arc {
    int tail;
    int head;
    std::int64_t lower;
    std::int64_t capacity;
    std::int64_t cost;
  };
  struct Edge {
    int to;
    int rev;     // index of the paired edge
    int arc;     // original arc, -1 for source/sink edges
    std::int64_t residual;
    std::int64_t cost;
  };

  void build_residual();
  bool initial_potentials();

  int num_nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::int64_t> supply_;

  // Residual network over num_nodes_ + 2 nodes (super source, super sink).
  int source_ = 0;
  int sink_ = 0;
  std::vector<int> first_;  // CSR offsets
  std::vector<Edge> edges_;
  std::vector<std::int64_t> potential_;

  Status status_ = Status::kNotSolved;
  std::vector<std::int64_t> flow_;
  std::int64_t total_cost_ = 0;
  int augmentations_ = 0;
};

}  // namespace vshare
