// vshare: generate instances, solve scenarios, run grids, cross-check the
// solvers against the exhaustive oracle.
//
// Exit codes: 0 success, 1 error, 2 a solve hit its time or node limit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/mincost_solver.hpp"
#include "vshare/multicommodity_solver.hpp"
#include "vshare/oracle.hpp"
#include "vshare/scenario.hpp"
#include "vshare/trip_graph.hpp"

namespace {

using namespace vshare;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeout = 2;

int cmd_gen(int users, std::uint64_t seed, const std::string& pref, const std::string& out) {
  const auto variant = parse_pref_variant(pref);
  if (!variant) throw std::invalid_argument("unknown preference variant '" + pref + "'");
  Instance in = generate_instance(seed, users);
  if (*variant != PrefVariant::kNone) in = assign_preferences(in, *variant, seed);
  if (out == "-") {
    std::cout << serialize_instance(in);
  } else {
    save_instance(in, out);
  }
  return kExitOk;
}

int cmd_solve(const std::string& path, const std::string& model_text, int fleet,
              const std::string& objective_text, const std::string& out, double time_limit,
              std::int64_t node_limit) {
  const auto model = parse_model(model_text);
  if (!model) throw std::invalid_argument("unknown model '" + model_text + "'");
  const auto objective = parse_objective(objective_text);
  if (!objective) throw std::invalid_argument("unknown objective '" + objective_text + "'");
  ScenarioOptions opt;
  opt.bnb.time_limit_s = time_limit;
  opt.bnb.node_limit = node_limit;
  const SolutionReport r = run_scenario(load_instance(path), *model, fleet, *objective, opt);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (out != "-") {
    file.open(out);
    if (!file) throw std::runtime_error("cannot write " + out);
    os = &file;
  }
  write_reports_csv({r}, *os);
  std::fprintf(stderr, "%s m=%d total %.3f savings %.3f solve %.3fs%s\n",
               std::string(model_name(r.model)).c_str(), r.fleet, r.cost_total, r.savings,
               r.solve_time_s, r.valid ? "" : " INVALID");
  if (!r.valid || !r.objective_consistent) return kExitError;
  return r.timed_out() ? kExitTimeout : kExitOk;
}

int cmd_grid(const std::string& config_path, const std::string& dir, bool verbose) {
  const GridConfig cfg = config_path.empty() ? GridConfig{} : load_grid_config(config_path);
  const auto rows = run_grid(cfg, verbose ? &std::cerr : nullptr);
  write_grid_outputs(rows, dir);
  int errors = 0, timeouts = 0;
  for (const auto& r : rows) {
    errors += !r.error.empty() || !r.valid || !r.objective_consistent;
    timeouts += r.timed_out();
  }
  std::fprintf(stderr, "%zu rows, %d errors, %d timeouts -> %s\n", rows.size(), errors, timeouts,
               dir.c_str());
  if (errors) return kExitError;
  return timeouts ? kExitTimeout : kExitOk;
}

int cmd_oracle_check(int max_trips, int seeds) {
  int mismatches = 0;
  for (int s = 1; s <= seeds; ++s) {
    SmallInstanceConfig sc;
    sc.num_trips = max_trips;
    sc.restrict_prob = 0.3;
    const Instance in = random_small_instance(static_cast<std::uint64_t>(s), sc);

    const FlowGraph single = build_single_graph(in, Mode::kCarType1, equal_fleet(2, 2));
    const auto a = solve_min_cost_flow(single).objective_micro;
    const auto b = oracle_solve(single).objective_micro;

    const std::vector<Mode> modes = {Mode::kCarType1, Mode::kCarType2};
    const std::vector<std::vector<DepotFleet>> fleets(2, equal_fleet(2, 2));
    const FlowGraph multi = build_multi_graph(in, modes, fleets);
    const auto c = solve_multicommodity(multi).objective_micro;
    const auto d = oracle_solve(multi).objective_micro;
    if (a != b || c != d) {
      ++mismatches;
      std::printf("seed %d: single %lld vs oracle %lld, multi %lld vs oracle %lld\n", s,
                  static_cast<long long>(a), static_cast<long long>(b),
                  static_cast<long long>(c), static_cast<long long>(d));
    }
  }
  std::printf("%d instances, %d mismatches\n", seeds, mismatches);
  return mismatches ? kExitError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle-sharing flow models: instance generation, solving and experiment grids"};
  app.require_subcommand(1);

  int users = 20;
  std::uint64_t seed = 1;
  std::string pref = "none";
  std::string out = "-";
  auto* gen = app.add_subcommand("gen", "Generate an instance as JSON");
  gen->add_option("--users", users, "Number of users")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--pref", pref, "Preference variant (none, prefVar0..prefVar6)");
  gen->add_option("-o,--output", out, "Output file, - for stdout");

  std::string instance_path, model = "mf-c", objective = "base";
  int fleet = 4;
  double time_limit = 120.0;
  std::int64_t node_limit = kScenarioNodeLimit;
  auto* solve = app.add_subcommand("solve", "Solve one scenario and print its report row");
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  solve->add_option("--model", model, "mf-c, mf-e, mmc, all-car1, all-car2 or no-car");
  solve->add_option("--fleet", fleet, "Total number of shared cars");
  solve->add_option("--objective", objective, "base or time");
  solve->add_option("--time-limit", time_limit, "Branch-and-bound limit in seconds");
  solve->add_option("--node-limit", node_limit, "Branch-and-bound node budget");
  solve->add_option("-o,--output", out, "Report CSV, - for stdout");

  std::string config, dir = "results";
  bool verbose = false;
  auto* grid = app.add_subcommand("grid", "Run a scenario grid and write CSV and plot data");
  grid->add_option("--config", config, "Grid JSON (defaults to the full grid)");
  grid->add_option("-o,--output", dir, "Output directory");
  grid->add_flag("-v,--verbose", verbose, "Print one line per cell");

  int max_trips = 8, seeds = 50;
  auto* oracle = app.add_subcommand("oracle-check", "Compare both solvers with the oracle");
  oracle->add_option("--max-trips", max_trips, "Trips per random instance")
      ->check(CLI::Range(1, 12));
  oracle->add_option("--seeds", seeds, "Number of instances")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(users, seed, pref, out);
    if (*solve) return cmd_solve(instance_path, model, fleet, objective, out, time_limit, node_limit);
    if (*grid) return cmd_grid(config, dir, verbose);
    if (*oracle) return cmd_oracle_check(max_trips, seeds);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
