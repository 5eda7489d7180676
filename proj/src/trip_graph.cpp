#include "vshare/trip_graph.hpp"

#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "vshare/cost_model.hpp"

namespace vshare {

namespace {

constexpr std::array<std::string_view, 6> kNodeKindNames = {
    "depot_start", "depot_end", "trip_start", "trip_end", "supra_source", "supra_sink"};
constexpr std::array<std::string_view, 5> kArcKindNames = {"trip", "connection", "depot_access",
                                                           "depot_bypass", "supra"};

// Per trip and commodity: savings (nullopt if the trip is unusable) and the
// commodity's schedule.
struct TripView {
  std::vector<std::optional<double>> savings;
  std::vector<TripSchedule> schedule;
  bool in_graph = false;
};

std::vector<TripView> evaluate_trips(const Instance& in, std::span<const Mode> modes) {
  const auto baselines = default_baseline_mots(in.mot_table);
  const MotParams& fallback = in.mot_table[Mode::kTaxi];
  std::vector<TripView> views(in.trips.size());
  for (std::size_t t = 0; t < in.trips.size(); ++t) {
    TripView& v = views[t];
    v.savings.resize(modes.size());
    v.schedule.resize(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const MotParams& mot = in.mot_table[modes[k]];
      const Cost s = trip_savings(in.trips[t], in.depots, mot, baselines, fallback, in.cost_config);
      if (!s.is_finite()) continue;
      // trip_savings is finite only when the schedule exists.
      v.schedule[k] = *schedule_trip(in.trips[t], in.depots, mot);
      v.savings[k] = s.value();
      v.in_graph = true;
    }
  }
  return views;
}

void check_modes(const Instance& in, std::span<const Mode> modes) {
  if (modes.empty()) throw GraphBuildError("at least one shared mode is required");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (!in.mot_table[modes[i]].shared) {
      throw GraphBuildError(std::string(mode_name(modes[i])) + " is not a shared mode");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (modes[i] == modes[j]) throw GraphBuildError("duplicate shared mode");
    }
  }
}

void check_fleet(const Instance& in, std::span<const DepotFleet> fleet) {
  if (fleet.size() != in.depots.size()) {
    throw GraphBuildError("fleet must list every depot");
  }
  std::int64_t start = 0, end = 0;
  for (const DepotFleet& f : fleet) {
    if (f.start < 0 || f.end < 0) throw GraphBuildError("fleet counts must be >= 0");
    start += f.start;
    end += f.end;
  }
  if (start != end) throw GraphBuildError("total supply differs from total demand");
}

class Builder {
 public:
  Builder(FlowGraph& g, int num_commodities) : g_(g), nk_(num_commodities) {
    g_.balance.assign(nk_, {});
  }

  int add_node(NodeKind kind, int depot, int trip, int commodity) {
    g_.nodes.push_back({kind, depot, trip, commodity});
    for (auto& b : g_.balance) b.push_back(0);
    return g_.num_nodes() - 1;
  }

  // Arc usable by the single commodity k.
  int add_arc_for(int tail, int head, std::int64_t cap, ArcKind kind, int trip, int k,
                  double savings, bool unbounded = false) {
    std::vector<std::optional<double>> s(nk_);
    s[k] = savings;
    return add_arc(tail, head, cap, kind, trip, std::move(s), unbounded);
  }

  int add_arc(int tail, int head, std::int64_t cap, ArcKind kind, int trip,
              std::vector<std::optional<double>> savings, bool unbounded = false) {
    g_.arcs.push_back({tail, head, cap, unbounded, kind, trip, std::move(savings)});
    return g_.num_arcs() - 1;
  }

 private:
  FlowGraph& g_;
  int nk_;
};

// Trip and connection structure shared by both graph shapes. depot_start /
// depot_end give A_d / A^k_d node ids per commodity and depot.
void add_trip_layer(const Instance& in, const std::vector<TripView>& views, FlowGraph& g,
                    Builder& b, const std::vector<std::vector<int>>& depot_start,
                    const std::vector<std::vector<int>>& depot_end) {
  const int nk = g.num_commodities();
  const int nt = static_cast<int>(in.trips.size());
  std::vector<int> o_node(nt, -1), e_node(nt, -1);
  g.trip_arc.assign(nt, -1);
  for (int t = 0; t < nt; ++t) {
    if (!views[t].in_graph) continue;
    o_node[t] = b.add_node(NodeKind::kTripStart, -1, t, -1);
    e_node[t] = b.add_node(NodeKind::kTripEnd, -1, t, -1);
  }
  for (int t = 0; t < nt; ++t) {
    if (!views[t].in_graph) continue;
    const Trip& trip = in.trips[t];
    g.trip_arc[t] = b.add_arc(o_node[t], e_node[t], 1, ArcKind::kTrip, t, views[t].savings);
    for (int k = 0; k < nk; ++k) {
      if (!views[t].savings[k]) continue;
      b.add_arc_for(depot_start[k][trip.origin_depot], o_node[t], 1, ArcKind::kDepotAccess, t, k,
                    0.0);
      b.add_arc_for(e_node[t], depot_end[k][trip.dest_depot], 1, ArcKind::kDepotAccess, t, k,
                    0.0);
    }
  }
  for (int t = 0; t < nt; ++t) {
    if (!views[t].in_graph) continue;
    for (int u = 0; u < nt; ++u) {
      if (u == t || !views[u].in_graph) continue;
      if (in.trips[t].dest_depot != in.trips[u].origin_depot) continue;
      std::vector<std::optional<double>> s(nk);
      bool any = false;
      for (int k = 0; k < nk; ++k) {
        if (!views[t].savings[k] || !views[u].savings[k]) continue;
        if (views[t].schedule[k].end_min <= views[u].schedule[k].start_min) {
          s[k] = 0.0;
          any = true;
        }
      }
      if (any) b.add_arc(e_node[t], o_node[u], 1, ArcKind::kConnection, -1, std::move(s));
    }
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view node_kind_name(NodeKind k) { return kNodeKindNames[static_cast<int>(k)]; }
std::string_view arc_kind_name(ArcKind k) { return kArcKindNames[static_cast<int>(k)]; }

int FlowGraph::num_trip_arcs() const {
  int n = 0;
  for (const GraphArc& a : arcs) n += a.kind == ArcKind::kTrip;
  return n;
}

std::int64_t FlowGraph::supply(int commodity) const {
  std::int64_t s = 0;
  for (std::int64_t b : balance[commodity]) {
    if (b < 0) s -= b;
  }
  return s;
}

std::vector<int> FlowGraph::topological_order() const {
  std::vector<int> indegree(nodes.size(), 0);
  std::vector<std::vector<int>> out(nodes.size());
  for (const GraphArc& a : arcs) {
    ++indegree[a.head];
    out[a.tail].push_back(a.head);
  }
  std::vector<int> order;
  order.reserve(nodes.size());
  for (int i = 0; i < num_nodes(); ++i) {
    if (indegree[i] == 0) order.push_back(i);
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    for (int h : out[order[pos]]) {
      if (--indegree[h] == 0) order.push_back(h);
    }
  }
  if (order.size() != nodes.size()) throw std::logic_error("flow graph has a cycle");
  return order;
}

bool FlowGraph::is_acyclic() const {
  try {
    topological_order();
    return true;
  } catch (const std::logic_error&) {
    return false;
  }
}

std::vector<DepotFleet> equal_fleet(int total, int num_depots) {
  if (num_depots <= 0 || total < 0 || total % num_depots != 0) {
    throw GraphBuildError("fleet of " + std::to_string(total) + " cannot be split over " +
                          std::to_string(num_depots) + " depots");
  }
  return std::vector<DepotFleet>(num_depots, {total / num_depots, total / num_depots});
}

FlowGraph build_single_graph(const Instance& in, Mode shared_mot,
                             std::span<const DepotFleet> fleet) {
  const Mode modes[] = {shared_mot};
  check_modes(in, modes);
  check_fleet(in, fleet);
  const auto views = evaluate_trips(in, modes);

  FlowGraph g;
  g.commodities = {shared_mot};
  Builder b(g, 1);
  const int nd = static_cast<int>(in.depots.size());
  std::int64_t total = 0;
  for (const DepotFleet& f : fleet) total += f.start;

  std::vector<std::vector<int>> start(1), end(1, std::vector<int>(nd, -1));
  for (int d = 0; d < nd; ++d) start[0].push_back(b.add_node(NodeKind::kDepotStart, d, -1, -1));
  // End nodes follow the trip nodes so ids run in time order.
  int trip_nodes = 0;
  for (const auto& v : views) trip_nodes += v.in_graph ? 2 : 0;
  for (int d = 0; d < nd; ++d) end[0][d] = nd + trip_nodes + d;

  add_trip_layer(in, views, g, b, start, end);
  for (int d = 0; d < nd; ++d) {
    const int id = b.add_node(NodeKind::kDepotEnd, d, -1, -1);
    if (id != end[0][d]) throw std::logic_error("depot end node id mismatch");
  }
  for (int d = 0; d < nd; ++d) {
    b.add_arc_for(start[0][d], end[0][d], total, ArcKind::kDepotBypass, -1, 0, 0.0, true);
    g.balance[0][start[0][d]] = -fleet[d].start;
    g.balance[0][end[0][d]] = fleet[d].end;
  }
  return g;
}

FlowGraph build_multi_graph(const Instance& in, std::span<const Mode> shared_mots,
                            std::span<const std::vector<DepotFleet>> fleet) {
  check_modes(in, shared_mots);
  if (fleet.size() != shared_mots.size()) {
    throw GraphBuildError("fleet must list every shared mode");
  }
  for (const auto& f : fleet) check_fleet(in, f);
  const auto views = evaluate_trips(in, shared_mots);

  FlowGraph g;
  g.multi = true;
  g.commodities.assign(shared_mots.begin(), shared_mots.end());
  const int nk = g.num_commodities();
  const int nd = static_cast<int>(in.depots.size());
  Builder b(g, nk);

  std::int64_t total = 0;
  std::vector<std::int64_t> delta(nk, 0);
  for (int k = 0; k < nk; ++k) {
    for (const DepotFleet& f : fleet[k]) delta[k] += f.start;
    total += delta[k];
  }

  std::vector<int> source(nk), sink(nk);
  std::vector<std::vector<int>> start(nk), end(nk, std::vector<int>(nd, -1));
  for (int k = 0; k < nk; ++k) source[k] = b.add_node(NodeKind::kSupraSource, -1, -1, k);
  for (int k = 0; k < nk; ++k) {
    for (int d = 0; d < nd; ++d) start[k].push_back(b.add_node(NodeKind::kDepotStart, d, -1, k));
  }
  int trip_nodes = 0;
  for (const auto& v : views) trip_nodes += v.in_graph ? 2 : 0;
  int next = g.num_nodes() + trip_nodes;
  for (int k = 0; k < nk; ++k) {
    for (int d = 0; d < nd; ++d) end[k][d] = next++;
  }
  add_trip_layer(in, views, g, b, start, end);
  for (int k = 0; k < nk; ++k) {
    for (int d = 0; d < nd; ++d) {
      if (b.add_node(NodeKind::kDepotEnd, d, -1, k) != end[k][d]) {
        throw std::logic_error("depot end node id mismatch");
      }
    }
  }
  for (int k = 0; k < nk; ++k) sink[k] = b.add_node(NodeKind::kSupraSink, -1, -1, k);

  for (int k = 0; k < nk; ++k) {
    for (int d = 0; d < nd; ++d) {
      b.add_arc_for(start[k][d], end[k][d], total, ArcKind::kDepotBypass, -1, k, 0.0, true);
    }
    for (int d = 0; d < nd; ++d) {
      b.add_arc_for(source[k], start[k][d], fleet[k][d].start, ArcKind::kSupra, -1, k, 0.0);
      b.add_arc_for(end[k][d], sink[k], fleet[k][d].end, ArcKind::kSupra, -1, k, 0.0);
    }
    g.balance[k][source[k]] = -delta[k];
    g.balance[k][sink[k]] = delta[k];
  }
  return g;
}

void write_graph_dump(const FlowGraph& g, std::ostream& out) {
  out << "vshare-graph 1\n";
  out << "multi " << (g.multi ? 1 : 0) << "\n";
  out << "commodities " << g.num_commodities();
  for (Mode m : g.commodities) out << ' ' << mode_name(m);
  out << "\n";
  out << "trips " << g.trip_arc.size() << "\n";
  out << "nodes " << g.num_nodes() << "\n";
  for (int i = 0; i < g.num_nodes(); ++i) {
    const GraphNode& n = g.nodes[i];
    out << "n " << i << ' ' << node_kind_name(n.kind) << ' ' << n.depot << ' ' << n.trip << ' '
        << n.commodity;
    for (int k = 0; k < g.num_commodities(); ++k) out << ' ' << g.balance[k][i];
    out << "\n";
  }
  out << "arcs " << g.num_arcs() << "\n";
  for (int i = 0; i < g.num_arcs(); ++i) {
    const GraphArc& a = g.arcs[i];
    out << "a " << i << ' ' << a.tail << ' ' << a.head << ' ' << arc_kind_name(a.kind) << ' '
        << a.trip << ' ' << (a.unbounded ? "inf:" : "") << a.capacity;
    for (const auto& s : a.savings) out << ' ' << (s ? format_double(*s) : std::string("-"));
    out << "\n";
  }
}

FlowGraph read_graph_dump(std::istream& in) {
  auto fail = [](const std::string& what) -> void {
    throw std::runtime_error("malformed graph dump: " + what);
  };
  auto expect = [&](std::istream& s, const std::string& word) {
    std::string w;
    if (!(s >> w) || w != word) fail("expected '" + word + "'");
  };
  FlowGraph g;
  std::string word;
  int version = 0, multi = 0, nk = 0;
  expect(in, "vshare-graph");
  in >> version;
  if (version != 1) fail("unsupported version");
  expect(in, "multi");
  in >> multi;
  g.multi = multi != 0;
  expect(in, "commodities");
  in >> nk;
  for (int k = 0; k < nk; ++k) {
    in >> word;
    auto m = parse_mode(word);
    if (!m) fail("unknown mode " + word);
    g.commodities.push_back(*m);
  }
  std::size_t ntrips = 0;
  expect(in, "trips");
  in >> ntrips;
  g.trip_arc.assign(ntrips, -1);
  int nn = 0;
  expect(in, "nodes");
  in >> nn;
  g.balance.assign(nk, std::vector<std::int64_t>(nn, 0));
  auto node_kind = [&](const std::string& name) {
    for (int i = 0; i < 6; ++i) {
      if (kNodeKindNames[i] == name) return static_cast<NodeKind>(i);
    }
    fail("unknown node kind " + name);
    return NodeKind::kTripStart;
  };
  auto arc_kind = [&](const std::string& name) {
    for (int i = 0; i < 5; ++i) {
      if (kArcKindNames[i] == name) return static_cast<ArcKind>(i);
    }
    fail("unknown arc kind " + name);
    return ArcKind::kTrip;
  };
  for (int i = 0; i < nn; ++i) {
    int id = 0;
    expect(in, "n");
    GraphNode n;
    in >> id >> word >> n.depot >> n.trip >> n.commodity;
    if (id != i) fail("node ids out of order");
    n.kind = node_kind(word);
    for (int k = 0; k < nk; ++k) in >> g.balance[k][i];
    g.nodes.push_back(n);
  }
  int na = 0;
  expect(in, "arcs");
  in >> na;
  for (int i = 0; i < na; ++i) {
    int id = 0;
    std::string kind, cap;
    GraphArc a;
    expect(in, "a");
    in >> id >> a.tail >> a.head >> kind >> a.trip >> cap;
    if (id != i) fail("arc ids out of order");
    a.kind = arc_kind(kind);
    if (cap.rfind("inf:", 0) == 0) {
      a.unbounded = true;
      cap = cap.substr(4);
    }
    a.capacity = std::stoll(cap);
    for (int k = 0; k < nk; ++k) {
      in >> word;
      a.savings.push_back(word == "-" ? std::nullopt : std::optional<double>(std::stod(word)));
    }
    if (a.kind == ArcKind::kTrip && a.trip >= 0 && static_cast<std::size_t>(a.trip) < ntrips) {
      g.trip_arc[a.trip] = i;
    }
    g.arcs.push_back(std::move(a));
  }
  if (!in) fail("truncated input");
  return g;
}

}  // namespace vshare
