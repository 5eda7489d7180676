// Scenario runs: solve one model on one instance and recost the outcome
// under the full cost model, plus the grid driver and its CSV output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vshare/instance.hpp"
#include "vshare/instance_gen.hpp"
#include "vshare/multicommodity_solver.hpp"

namespace vshare {

enum class Model : std::uint8_t { kMfC, kMfE, kMmc, kAllCar1, kAllCar2, kNoCar };

inline constexpr std::array<Model, 6> kAllModels = {Model::kMfC,     Model::kMfE,
                                                    Model::kMmc,     Model::kAllCar1,
                                                    Model::kAllCar2, Model::kNoCar};

std::string_view model_name(Model m);  // "MF-C", "MF-E", "MMC", "ALL-CAR1", ...
// Accepts the display names and the lower-case CLI spellings ("mf-c").
std::optional<Model> parse_model(std::string_view name);
bool model_solves(Model m);  // false for the fixed-policy references

struct SolutionReport {
  Model model = Model::kMfC;
  int users = 0;
  int fleet = 0;
  PrefVariant variant = PrefVariant::kNone;
  Objective objective = Objective::kBase;
  std::uint64_t seed = 0;

  int trips = 0;
  int trips_car_type1 = 0;  // trips covered by each car type
  int trips_car_type2 = 0;
  double cost_car_type1 = 0.0;
  double cost_car_type2 = 0.0;
  double cost_other_mots = 0.0;
  double cost_total = 0.0;
  double baseline_total = 0.0;  // every trip by its cheapest allowed other MOT
  double savings = 0.0;         // baseline_total - cost_total, >= 0
  double trips_per_car_type1 = 0.0;  // per used car of the type
  double trips_per_car_type2 = 0.0;

  double solver_objective = 0.0;  // savings under the solve objective
  SolveStatus status = SolveStatus::kOptimal;
  double bound_gap = 0.0;
  bool objective_consistent = true;
  bool valid = true;  // independent flow check passed
  double solve_time_s = 0.0;
  std::string error;

  bool timed_out() const { return status != SolveStatus::kOptimal; }
};

// Scenario runs stop branch-and-bound on a node budget, so a limited row
// is the same on every run; the time limit stays as a backstop.
inline constexpr std::int64_t kScenarioNodeLimit = 500;

struct ScenarioOptions {
  BnBOptions bnb = [] {
    BnBOptions o;
    o.node_limit = kScenarioNodeLimit;
    return o;
  }();
};

// Fleets are split equally over depots (and over the two car types for
// MMC). Throws GraphBuildError when the fleet does not split evenly.
SolutionReport run_scenario(const Instance& instance, Model model, int fleet, Objective objective,
                            const ScenarioOptions& options = {});

struct GridConfig {
  std::vector<int> users = {20, 50, 100, 150, 200, 250, 300};
  std::vector<int> fleets = {4, 8, 20, 40};
  std::vector<Model> models = {Model::kMfC, Model::kMfE, Model::kMmc};
  std::vector<PrefVariant> variants = {PrefVariant::kNone};
  std::vector<Objective> objectives = {Objective::kBase};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  GeneratorConfig generator;
  ScenarioOptions scenario;
};

GridConfig parse_grid_config(const std::string& json_text);
GridConfig load_grid_config(const std::string& path);

// One row per cell and seed, sorted by (users, seed, variant, model, fleet,
// objective). A failing cell yields a row carrying the error message.
std::vector<SolutionReport> run_grid(const GridConfig& config, std::ostream* progress = nullptr);

// Column order of results.csv.
const std::vector<std::string>& report_columns();
std::string report_csv_header();
std::string report_csv_row(const SolutionReport& r);
void write_reports_csv(const std::vector<SolutionReport>& rows, std::ostream& out);
void write_timings_csv(const std::vector<SolutionReport>& rows, std::ostream& out);

// Means over seeds per (model, users, fleet, variant, objective).
void write_aggregate_csv(const std::vector<SolutionReport>& rows, std::ostream& out);
// Per users: mean totals over fleets and seeds for MF-C, MF-E, MMC and the
// ratio of each to MF-E.
void write_model_comparison_csv(const std::vector<SolutionReport>& rows, std::ostream& out);

// results.csv, timings.csv, aggregate.csv, comparison.csv and plot series
// under dir/plots.
void write_grid_outputs(const std::vector<SolutionReport>& rows, const std::string& dir);

}  // namespace vshare
