#include "vshare/multicommodity_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <tuple>
#include <utility>

#include "vshare/cost_model.hpp"
#include "vshare/network_flow.hpp"

namespace vshare {

std::string_view solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kTimedOut:
      return "timed_out";
    case SolveStatus::kNodeLimit:
      return "node_limit";
  }
  return "unknown";
}

double MultiFlow::objective() const { return from_micro(objective_micro); }
double MultiFlow::bound_gap() const { return from_micro(bound_micro - objective_micro); }
double RelaxationResult::bound() const { return from_micro(bound_micro); }

ArcFixing::ArcFixing(int num_commodities, int num_arcs)
    : fix_(num_commodities, std::vector<ArcFix>(num_arcs, ArcFix::kFree)) {}

bool ArcFixing::consistent(const FlowGraph& graph) const {
  for (int a = 0; a < graph.num_arcs(); ++a) {
    std::int64_t forced = 0;
    for (const auto& f : fix_) forced += f[a] == ArcFix::kOne;
    if (forced > graph.arcs[a].capacity) return false;
  }
  return true;
}

RelaxationResult relaxation_bound(const FlowGraph& graph, const ArcFixing& fixed) {
  if (!fixed.consistent(graph)) throw std::invalid_argument("inconsistent arc fixing");
  RelaxationResult r;
  for (int k = 0; k < graph.num_commodities(); ++k) {
    auto f = solve_commodity(graph, k, fixed.commodity(k));
    if (!f) throw InfeasibleSupply("commodity cannot route its fleet under the fixing");
    r.bound_micro += f->objective_micro;
    r.flows.push_back(std::move(*f));
  }
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Evaluation {
  std::int64_t bound = 0;  // Lagrangian bound
  std::vector<CommodityFlow> flows;
  std::int64_t objective = 0;  // true savings of the relaxed flows
  bool feasible = false;       // joint capacities respected
  int branch_arc = -1;         // most violated arc, -1 when feasible
  std::int64_t lagrangian = 0;  // dual value the flows' reduced costs refer to
};

struct SearchNode {
  std::vector<std::pair<std::int64_t, ArcFix>> fixes;  // key = k * arcs + arc
  std::int64_t upper_bound = 0;
  int depth = 0;
  std::int64_t seq = 0;
  std::vector<double> lambda;  // parent's best multipliers, the warm start
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.upper_bound != b.upper_bound) return a.upper_bound < b.upper_bound;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const FlowGraph& graph, const BnBOptions& options)
      : g_(graph), opt_(options), nk_(graph.num_commodities()), na_(graph.num_arcs()) {
    coupled_index_.assign(na_, -1);
    for (int a = 0; a < na_; ++a) {
      const GraphArc& arc = g_.arcs[a];
      int users = 0;
      for (int k = 0; k < nk_; ++k) users += arc.allows(k);
      if (arc.kind == ArcKind::kTrip && users > 1) {
        coupled_index_[a] = static_cast<int>(coupled_.size());
        coupled_.push_back(a);
      }
    }
    lambda_.assign(coupled_.size(), 0);
  }

  MultiFlow run() {
    start_ = Clock::now();
    SearchNode root;
    root.upper_bound = std::numeric_limits<std::int64_t>::max();
    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open;
    open.push(std::move(root));
    std::int64_t seq = 1;
    SolveStatus status = SolveStatus::kOptimal;
    std::int64_t unexplored_bound = std::numeric_limits<std::int64_t>::min();

    while (!open.empty()) {
      if (nodes_ >= opt_.node_limit) {
        status = SolveStatus::kNodeLimit;
        break;
      }
      if (nodes_ > 0 && elapsed_s() > opt_.time_limit_s) {
        status = SolveStatus::kTimedOut;
        break;
      }
      SearchNode node = open.top();
      open.pop();
      if (incumbent_ && node.upper_bound <= incumbent_objective_) continue;
      ++nodes_;

      ArcFixing fixing(nk_, na_);
      for (const auto& [key, value] : node.fixes) {
        fixing.set(static_cast<int>(key / na_), static_cast<int>(key % na_), value);
      }
      auto outcome = process(fixing, node.depth == 0, node.lambda);
      const std::int64_t node_bound =
          outcome ? std::min(node.upper_bound, outcome->bound) : node.upper_bound;
      if (opt_.log) {
        *opt_.log << "node " << nodes_ << " depth " << node.depth << " bound "
                  << (outcome ? from_micro(node_bound) : -1.0) << " incumbent "
                  << (incumbent_ ? from_micro(incumbent_objective_) : 0.0) << "\n";
      }
      if (!outcome) {
        if (node.depth == 0) throw InfeasibleSupply("root relaxation is infeasible");
        continue;
      }
      if (outcome->branch_arc < 0) continue;
      if (incumbent_ && node_bound <= incumbent_objective_) continue;
      if (opt_.reduced_cost_fixing && !fix_by_reduced_cost(*outcome, fixing, node.fixes)) continue;

      const int a = outcome->branch_arc;
      std::vector<int> using_k;
      bool forced = false;
      for (int k = 0; k < nk_; ++k) {
        forced = forced || fixing.get(k, a) == ArcFix::kOne;
        if (outcome->flows[k].arc_flow[a] > 0 && fixing.get(k, a) != ArcFix::kZero) {
          using_k.push_back(k);
        }
      }
      for (int k : using_k) {
        SearchNode child;
        child.fixes = node.fixes;
        for (int j = 0; j < nk_; ++j) {
          if (!g_.arcs[a].allows(j)) continue;
          child.fixes.emplace_back(key(j, a), j == k ? ArcFix::kOne : ArcFix::kZero);
        }
        child.upper_bound = node_bound;
        child.depth = node.depth + 1;
        child.seq = seq++;
        child.lambda = best_lambda_;
        open.push(std::move(child));
      }
      if (forced) continue;
      SearchNode none;
      none.fixes = std::move(node.fixes);
      for (int k : using_k) none.fixes.emplace_back(key(k, a), ArcFix::kZero);
      none.upper_bound = node_bound;
      none.depth = node.depth + 1;
      none.seq = seq++;
      none.lambda = best_lambda_;
      open.push(std::move(none));
    }

    if (!incumbent_) throw InfeasibleSupply("no feasible multi-commodity flow found");
    MultiFlow out;
    out.status = status;
    out.nodes = nodes_;
    out.objective_micro = incumbent_objective_;
    out.arc_flow = std::move(*incumbent_);
    if (status == SolveStatus::kOptimal) {
      out.bound_micro = out.objective_micro;
    } else {
      while (!open.empty()) {
        unexplored_bound = std::max(unexplored_bound, open.top().upper_bound);
        open.pop();
      }
      out.bound_micro = std::max(out.objective_micro, unexplored_bound);
    }
    return out;
  }

 private:
  std::int64_t key(int k, int a) const { return static_cast<std::int64_t>(k) * na_ + a; }

  double elapsed_s() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  std::vector<std::int64_t> penalty_for(const std::vector<double>& lambda) const {
    std::vector<std::int64_t> p(na_, 0);
    for (std::size_t c = 0; c < coupled_.size(); ++c) p[coupled_[c]] = std::llround(lambda[c]);
    return p;
  }

  std::optional<Evaluation> evaluate(const ArcFixing& fixing, const std::vector<double>& lambda) {
    const auto penalty = penalty_for(lambda);
    Evaluation ev;
    for (int k = 0; k < nk_; ++k) {
      auto f = solve_commodity(g_, k, fixing.commodity(k), penalty);
      if (!f) return std::nullopt;
      ev.bound += f->adjusted_micro;
      ev.objective += f->objective_micro;
      ev.flows.push_back(std::move(*f));
    }
    for (std::size_t c = 0; c < coupled_.size(); ++c) {
      ev.bound += penalty[coupled_[c]] * g_.arcs[coupled_[c]].capacity;
    }
    // Most violated arc; among equals the one whose weakest child loses the
    // most dual value by the reduced costs, then trip arcs first.
    std::tuple<std::int64_t, std::int64_t, bool> best{0, 0, false};
    for (int a = 0; a < na_; ++a) {
      std::int64_t use = 0;
      std::int64_t sum = 0, largest = 0;
      for (int k = 0; k < nk_; ++k) {
        const CommodityFlow& f = ev.flows[k];
        if (f.arc_flow[a] == 0) continue;
        use += f.arc_flow[a];
        const std::int64_t loss = f.certified ? std::max<std::int64_t>(0, -f.reduced_cost[a]) : 0;
        sum += loss;
        largest = std::max(largest, loss);
      }
      const std::int64_t violation = use - g_.arcs[a].capacity;
      if (violation <= 0) continue;
      const std::tuple<std::int64_t, std::int64_t, bool> score{
          violation, sum - largest, g_.arcs[a].kind == ArcKind::kTrip};
      if (ev.branch_arc < 0 || score > best) {
        best = score;
        ev.branch_arc = a;
      }
    }
    ev.feasible = ev.branch_arc < 0;
    ev.lagrangian = ev.bound;
    if (ev.feasible) offer(ev.flows, ev.objective);
    return ev;
  }

  void offer(const std::vector<CommodityFlow>& flows, std::int64_t objective) {
    if (incumbent_ && objective <= incumbent_objective_) return;
    std::vector<std::vector<std::int64_t>> x;
    for (const auto& f : flows) x.push_back(f.arc_flow);
    incumbent_ = std::move(x);
    incumbent_objective_ = objective;
  }

  // Unit-capacity arcs whose reduced cost exceeds the distance between the
  // node's dual value and the incumbent cannot change in an improving
  // solution; they are fixed for the whole subtree. Returns false when the
  // implied fixings contradict each other, i.e. nothing here can improve.
  bool fix_by_reduced_cost(const Evaluation& ev, ArcFixing& fixing,
                           std::vector<std::pair<std::int64_t, ArcFix>>& fixes) const {
    if (!incumbent_) return true;
    const std::int64_t slack = ev.lagrangian - incumbent_objective_;
    for (int k = 0; k < nk_; ++k) {
      const CommodityFlow& f = ev.flows[k];
      if (!f.certified) continue;
      for (int a = 0; a < na_; ++a) {
        const GraphArc& arc = g_.arcs[a];
        if (arc.capacity != 1 || !arc.allows(k) || fixing.get(k, a) != ArcFix::kFree) continue;
        const std::int64_t rc = f.reduced_cost[a];
        if (f.arc_flow[a] == 0 && rc >= slack) {
          fixing.set(k, a, ArcFix::kZero);
          fixes.emplace_back(key(k, a), ArcFix::kZero);
        } else if (f.arc_flow[a] == 1 && -rc >= slack) {
          fixing.set(k, a, ArcFix::kOne);
          fixes.emplace_back(key(k, a), ArcFix::kOne);
          for (int j = 0; j < nk_; ++j) {
            if (j == k || !arc.allows(j)) continue;
            if (fixing.get(j, a) == ArcFix::kOne) return false;
            fixing.set(j, a, ArcFix::kZero);
            fixes.emplace_back(key(j, a), ArcFix::kZero);
          }
        }
      }
    }
    return true;
  }

  // Solves the commodities one after another, each barred from the trip
  // arcs taken by the earlier ones.
  void sequential_heuristic(const ArcFixing& fixing, const std::vector<double>& lambda) {
    const auto penalty = penalty_for(lambda);
    for (int first = 0; first < nk_; ++first) {
      ArcFixing local = fixing;
      std::vector<CommodityFlow> flows(nk_);
      std::int64_t objective = 0;
      bool ok = true;
      for (int step = 0; step < nk_ && ok; ++step) {
        const int k = (first + step) % nk_;
        auto f = solve_commodity(g_, k, local.commodity(k), penalty);
        if (!f) {
          ok = false;
          break;
        }
        for (int a : coupled_) {
          if (f->arc_flow[a] == 0) continue;
          for (int j = 0; j < nk_; ++j) {
            if (j == k || !g_.arcs[a].allows(j)) continue;
            if (local.get(j, a) == ArcFix::kOne) ok = false;
            local.set(j, a, ArcFix::kZero);
          }
        }
        objective += f->objective_micro;
        flows[k] = std::move(*f);
      }
      if (ok) offer(flows, objective);
    }
  }

  void subgradient(const ArcFixing& fixing, std::vector<double>& lambda, int iterations,
                   double theta, std::optional<Evaluation>& best) {
    int stall = 0;
    for (int it = 0; it < iterations; ++it) {
      if (elapsed_s() > opt_.time_limit_s) return;
      if (best && incumbent_ && best->bound <= incumbent_objective_) return;
      auto ev = evaluate(fixing, lambda);
      if (!ev) {
        best.reset();
        return;
      }
      if (!best || ev->bound < best->bound) {
        best = *ev;
        best_lambda_ = lambda;
        stall = 0;
      } else if (++stall >= 5) {
        theta *= 0.5;
        stall = 0;
      }
      double norm = 0.0;
      std::vector<double> grad(coupled_.size());
      for (std::size_t c = 0; c < coupled_.size(); ++c) {
        std::int64_t use = 0;
        for (int k = 0; k < nk_; ++k) use += ev->flows[k].arc_flow[coupled_[c]];
        grad[c] = static_cast<double>(g_.arcs[coupled_[c]].capacity - use);
        if (grad[c] > 0 && lambda[c] <= 0.0) grad[c] = 0.0;  // projected
        norm += grad[c] * grad[c];
      }
      if (norm == 0.0) return;
      const double target = incumbent_ ? static_cast<double>(incumbent_objective_)
                                       : ev->bound - 0.05 * std::abs(ev->bound) - 1e6;
      const double step = theta * std::max(1.0, ev->bound - target) / norm;
      for (std::size_t c = 0; c < coupled_.size(); ++c) {
        lambda[c] = std::max(0.0, lambda[c] - step * grad[c]);
      }
      if (it % 10 == 9) sequential_heuristic(fixing, lambda);
    }
  }

  // Returns the node bound and the solution to branch on, nullopt when the
  // node is infeasible. branch_arc is -1 when the node is settled.
  std::optional<Evaluation> process(const ArcFixing& fixing, bool is_root,
                                    const std::vector<double>& warm) {
    std::optional<Evaluation> best;
    if (coupled_.empty() || (is_root ? opt_.root_iterations : opt_.node_iterations) <= 0) {
      best = evaluate(fixing, std::vector<double>(coupled_.size(), 0.0));
      if (!best) return std::nullopt;
      best_lambda_.assign(coupled_.size(), 0.0);
      sequential_heuristic(fixing, best_lambda_);
    } else {
      std::vector<double> lambda = is_root || warm.empty() ? lambda_ : warm;
      sequential_heuristic(fixing, lambda);
      best_lambda_ = lambda;
      subgradient(fixing, lambda, is_root ? opt_.root_iterations : opt_.node_iterations,
                  is_root ? 2.0 : 0.5, best);
      if (!best) return std::nullopt;
      sequential_heuristic(fixing, best_lambda_);
    }
    if (incumbent_ && best->bound <= incumbent_objective_) {
      best->branch_arc = -1;
      return best;
    }
    if (best->feasible) {
      // Feasible but the penalties leave slack: fall back to the plain
      // decomposition, which is exact when it is itself feasible.
      const std::int64_t lagrangian_bound = best->bound;
      auto plain = evaluate(fixing, std::vector<double>(coupled_.size(), 0.0));
      if (!plain) return std::nullopt;
      plain->bound = std::min(plain->bound, lagrangian_bound);
      if (plain->feasible) plain->branch_arc = -1;
      return plain;
    }
    return best;
  }

  const FlowGraph& g_;
  const BnBOptions& opt_;
  int nk_;
  int na_;
  std::vector<int> coupled_;
  std::vector<int> coupled_index_;
  std::vector<double> lambda_;
  std::vector<double> best_lambda_;
  std::optional<std::vector<std::vector<std::int64_t>>> incumbent_;
  std::int64_t incumbent_objective_ = 0;
  std::int64_t nodes_ = 0;
  Clock::time_point start_;
};

}  // namespace

namespace {

// Arc identity with the commodity of depot and supra nodes dropped, so the
// copies of one depot layer line up across commodities.
using ArcSignature = std::tuple<int, int, int, int, int>;

ArcSignature signature(const FlowGraph& g, const GraphArc& a) {
  auto node = [&](int v) -> std::pair<int, int> {
    const GraphNode& n = g.nodes[v];
    if (n.kind == NodeKind::kTripStart || n.kind == NodeKind::kTripEnd) return {-1, v};
    return {static_cast<int>(n.kind), n.depot};
  };
  const auto [tk, tv] = node(a.tail);
  const auto [hk, hv] = node(a.head);
  return {static_cast<int>(a.kind), tk, tv, hk, hv};
}

// twin[k][a]: the arc of commodity k playing the role of commodity 0's arc
// a. Empty when some commodity differs from commodity 0 in its arcs or
// savings.
std::vector<std::vector<int>> twin_arcs(const FlowGraph& g) {
  const int nk = g.num_commodities();
  std::vector<std::map<ArcSignature, int>> by_sig(nk);
  for (int a = 0; a < g.num_arcs(); ++a) {
    for (int k = 0; k < nk; ++k) {
      if (g.arcs[a].allows(k)) by_sig[k].emplace(signature(g, g.arcs[a]), a);
    }
  }
  std::vector<std::vector<int>> twin(nk, std::vector<int>(g.num_arcs(), -1));
  for (int k = 0; k < nk; ++k) {
    if (by_sig[k].size() != by_sig[0].size()) return {};
    for (const auto& [sig, a] : by_sig[0]) {
      const auto it = by_sig[k].find(sig);
      if (it == by_sig[k].end()) return {};
      const GraphArc& mine = g.arcs[a];
      const GraphArc& theirs = g.arcs[it->second];
      if (arc_savings_micro(mine, 0) != arc_savings_micro(theirs, k)) return {};
      if (mine.kind != ArcKind::kSupra && mine.capacity != theirs.capacity) return {};
      twin[k][a] = it->second;
    }
  }
  return twin;
}

// Interchangeable commodities: pool the fleets on commodity 0's layer, solve
// one min-cost flow (a relaxation of the joint problem) and deal the routes
// back so every type meets its depot counts. nullopt when no such split of
// the pooled routes exists.
std::optional<MultiFlow> solve_pooled(const FlowGraph& g) {
  const int nk = g.num_commodities();
  const int nd = 1 + std::max_element(g.nodes.begin(), g.nodes.end(), [](const auto& a, const auto& b) {
                       return a.depot < b.depot;
                     })->depot;
  const auto twin = twin_arcs(g);
  if (twin.empty()) return std::nullopt;

  // starts[k][d] / ends[k][d] and commodity 0's supra arcs.
  std::vector<std::vector<std::int64_t>> starts(nk, std::vector<std::int64_t>(nd, 0));
  std::vector<std::vector<std::int64_t>> ends = starts;
  std::vector<int> supra_out(nd, -1), supra_in(nd, -1);
  for (int a = 0; a < g.num_arcs(); ++a) {
    const GraphArc& arc = g.arcs[a];
    if (arc.kind != ArcKind::kSupra || !arc.allows(0)) continue;
    const bool out = g.nodes[arc.tail].kind == NodeKind::kSupraSource;
    const int d = g.nodes[out ? arc.head : arc.tail].depot;
    (out ? supra_out : supra_in)[d] = a;
    for (int k = 0; k < nk; ++k) (out ? starts : ends)[k][d] = g.arcs[twin[k][a]].capacity;
  }

  FlowGraph pooled = g;
  pooled.commodities = {g.commodities[0]};
  pooled.balance = {g.balance[0]};
  for (GraphArc& arc : pooled.arcs) arc.savings.resize(1);
  for (int d = 0; d < nd; ++d) {
    std::int64_t s = 0, e = 0;
    for (int k = 0; k < nk; ++k) s += starts[k][d], e += ends[k][d];
    if (supra_out[d] < 0 || supra_in[d] < 0) return std::nullopt;
    pooled.arcs[supra_out[d]].capacity = s;
    pooled.arcs[supra_in[d]].capacity = e;
  }
  std::int64_t total = 0;
  for (int k = 0; k < nk; ++k) total += g.supply(k);
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (g.nodes[v].kind == NodeKind::kSupraSource && g.nodes[v].commodity == 0) pooled.balance[0][v] = -total;
    if (g.nodes[v].kind == NodeKind::kSupraSink && g.nodes[v].commodity == 0) pooled.balance[0][v] = total;
  }
  const auto flow = solve_commodity(pooled, 0);
  if (!flow) return std::nullopt;
  const auto routes = extract_routes(pooled, flow->arc_flow, 0);

  // Route counts per (start, end) depot pair, then one small transportation
  // problem per type over what is left.
  std::vector<std::vector<std::vector<int>>> by_pair(nd, std::vector<std::vector<int>>(nd));
  for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
    by_pair[routes[r].start_depot][routes[r].end_depot].push_back(r);
  }
  MultiFlow out;
  out.arc_flow.assign(nk, std::vector<std::int64_t>(g.num_arcs(), 0));
  auto give = [&](int k, const VehicleRoute& route) {
    for (int a : route.arcs) ++out.arc_flow[k][twin[k][a]];
    ++out.arc_flow[k][twin[k][supra_out[route.start_depot]]];
    ++out.arc_flow[k][twin[k][supra_in[route.end_depot]]];
  };
  for (int k = 0; k < nk; ++k) {
    MinCostFlowNetwork net(2 * nd);
    std::vector<std::vector<int>> cell(nd, std::vector<int>(nd));
    for (int s = 0; s < nd; ++s) {
      net.set_supply(s, starts[k][s]);
      net.set_supply(nd + s, -ends[k][s]);
      for (int e = 0; e < nd; ++e) {
        cell[s][e] = net.add_arc(s, nd + e, 0, static_cast<std::int64_t>(by_pair[s][e].size()), 0);
      }
    }
    if (net.solve() != MinCostFlowNetwork::Status::kOptimal) return std::nullopt;
    for (int s = 0; s < nd; ++s) {
      for (int e = 0; e < nd; ++e) {
        for (std::int64_t i = 0; i < net.flow(cell[s][e]); ++i) {
          give(k, routes[by_pair[s][e].back()]);
          by_pair[s][e].pop_back();
        }
      }
    }
  }
  out.objective_micro = flow->objective_micro;
  out.bound_micro = flow->objective_micro;
  out.nodes = 1;
  return out;
}

}  // namespace

MultiFlow solve_multicommodity(const FlowGraph& graph, const BnBOptions& options) {
  if (graph.num_commodities() > 1 && options.pool_identical) {
    if (auto pooled = solve_pooled(graph)) return *std::move(pooled);
  }
  BranchAndBound bnb(graph, options);
  return bnb.run();
}

}  // namespace vshare
