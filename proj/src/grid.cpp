#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "vshare/scenario.hpp"
#include "vshare/trip_graph.hpp"

namespace vshare {

namespace {

using json = nlohmann::json;

std::string fixed(double x, int digits) {
  if (std::abs(x) < 0.5 * std::pow(10.0, -digits)) x = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string eur(double x) { return fixed(x, 3); }

// CSV field quoting for free-text columns.
std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

auto cell_key(const SolutionReport& r) {
  return std::make_tuple(r.users, r.seed, static_cast<int>(r.variant), static_cast<int>(r.model),
                         r.fleet, static_cast<int>(r.objective));
}

template <typename T, typename Parse>
std::vector<T> parse_names(const json& j, const char* what, Parse parse) {
  std::vector<T> out;
  for (const auto& v : j) {
    const auto parsed = parse(v.get<std::string>());
    if (!parsed) throw std::invalid_argument(std::string("grid config: unknown ") + what + " '" +
                                             v.get<std::string>() + "'");
    out.push_back(*parsed);
  }
  return out;
}

void read_generator(const json& j, GeneratorConfig& g) {
  for (const auto& [key, value] : j.items()) {
    if (key == "num_depots") g.num_depots = value.get<int>();
    else if (key == "plane_km") g.plane_km = value.get<double>();
    else if (key == "depot_region") g.depot_region = value.get<double>();
    else if (key == "day_start_min") g.day_start_min = value.get<double>();
    else if (key == "day_end_min") g.day_end_min = value.get<double>();
    else if (key == "min_tasks") g.min_tasks = value.get<int>();
    else if (key == "max_tasks") g.max_tasks = value.get<int>();
    else if (key == "min_duration_min") g.min_duration_min = value.get<int>();
    else if (key == "max_duration_min") g.max_duration_min = value.get<int>();
    else if (key == "max_slack_min") g.max_slack_min = value.get<double>();
    else if (key == "home_depot_prob") g.home_depot_prob = value.get<double>();
    else if (key == "max_attempts") g.max_attempts = value.get<int>();
    else throw std::invalid_argument("grid config: unknown generator key '" + key + "'");
  }
  validate(g);
}

struct Mean {
  double sum = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  double value() const { return n ? sum / n : 0.0; }
};

}  // namespace

GridConfig parse_grid_config(const std::string& text) {
  const json j = json::parse(text);
  GridConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "users") {
      c.users = value.get<std::vector<int>>();
    } else if (key == "fleets") {
      c.fleets = value.get<std::vector<int>>();
    } else if (key == "models") {
      c.models = parse_names<Model>(value, "model", parse_model);
    } else if (key == "variants") {
      c.variants = parse_names<PrefVariant>(value, "variant", parse_pref_variant);
    } else if (key == "objectives") {
      c.objectives = parse_names<Objective>(value, "objective", parse_objective);
    } else if (key == "seeds") {
      c.seeds = value.get<std::vector<std::uint64_t>>();
    } else if (key == "num_seeds") {
      c.seeds.clear();
      for (std::uint64_t s = 1; s <= value.get<std::uint64_t>(); ++s) c.seeds.push_back(s);
    } else if (key == "generator") {
      read_generator(value, c.generator);
    } else if (key == "time_limit_s") {
      c.scenario.bnb.time_limit_s = value.get<double>();
    } else if (key == "node_limit") {
      c.scenario.bnb.node_limit = value.get<std::int64_t>();
    } else if (key == "root_iterations") {
      c.scenario.bnb.root_iterations = value.get<int>();
    } else if (key == "node_iterations") {
      c.scenario.bnb.node_iterations = value.get<int>();
    } else {
      throw std::invalid_argument("grid config: unknown key '" + key + "'");
    }
  }
  return c;
}

GridConfig load_grid_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid_config(ss.str());
}

std::vector<SolutionReport> run_grid(const GridConfig& c, std::ostream* progress) {
  std::vector<SolutionReport> rows;
  if (c.models.empty()) return rows;
  for (int u : c.users) {
    for (std::uint64_t seed : c.seeds) {
      std::optional<Instance> inst;
      std::string gen_error;
      try {
        inst = generate_instance(seed, u, c.generator);
      } catch (const std::exception& e) {
        gen_error = e.what();
      }
      for (PrefVariant variant : c.variants) {
        std::optional<Instance> vin;
        if (inst) vin = variant == PrefVariant::kNone ? *inst : assign_preferences(*inst, variant, seed);
        for (Model model : c.models) {
          for (int m : c.fleets) {
            for (Objective objective : c.objectives) {
              SolutionReport r;
              r.model = model;
              r.users = u;
              r.fleet = m;
              r.variant = variant;
              r.objective = objective;
              r.seed = seed;
              if (!vin) {
                r.error = gen_error;
              } else {
                try {
                  r = run_scenario(*vin, model, m, objective, c.scenario);
                  r.variant = variant;
                } catch (const std::exception& e) {
                  r.error = e.what();
                  r.valid = false;
                }
              }
              if (progress) {
                *progress << model_name(model) << " u=" << u << " m=" << m << " seed=" << seed
                          << " " << pref_variant_name(variant) << " " << objective_name(objective)
                          << (r.error.empty() ? "" : " error: " + r.error) << "\n";
              }
              rows.push_back(std::move(r));
            }
          }
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return cell_key(a) < cell_key(b); });
  return rows;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> kColumns = {
      "model",           "users",           "fleet",
      "variant",         "objective",       "seed",
      "status",          "trips",           "trips_car_type1",
      "trips_car_type2", "cost_car_type1",  "cost_car_type2",
      "cost_other_mots", "cost_total",      "baseline_total",
      "savings",         "trips_per_car_type1", "trips_per_car_type2",
      "solver_objective", "bound_gap",      "objective_consistent",
      "valid",           "error"};
  return kColumns;
}

std::string report_csv_header() {
  std::string out;
  for (const auto& c : report_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string report_csv_row(const SolutionReport& r) {
  std::ostringstream o;
  o << model_name(r.model) << ',' << r.users << ',' << r.fleet << ',' << pref_variant_name(r.variant)
    << ',' << objective_name(r.objective) << ',' << r.seed << ','
    << (r.error.empty() ? solve_status_name(r.status) : "error") << ',' << r.trips << ','
    << r.trips_car_type1 << ',' << r.trips_car_type2 << ',' << eur(r.cost_car_type1) << ','
    << eur(r.cost_car_type2) << ',' << eur(r.cost_other_mots) << ',' << eur(r.cost_total) << ','
    << eur(r.baseline_total) << ',' << eur(r.savings) << ',' << fixed(r.trips_per_car_type1, 1)
    << ',' << fixed(r.trips_per_car_type2, 1) << ',' << eur(r.solver_objective) << ','
    << eur(r.bound_gap) << ',' << (r.objective_consistent ? 1 : 0) << ',' << (r.valid ? 1 : 0)
    << ',' << quoted(r.error);
  return o.str();
}

void write_reports_csv(const std::vector<SolutionReport>& rows, std::ostream& out) {
  out << report_csv_header() << "\n";
  for (const auto& r : rows) out << report_csv_row(r) << "\n";
}

void write_timings_csv(const std::vector<SolutionReport>& rows, std::ostream& out) {
  out << "model,users,fleet,variant,objective,seed,solve_time_s\n";
  for (const auto& r : rows) {
    out << model_name(r.model) << ',' << r.users << ',' << r.fleet << ','
        << pref_variant_name(r.variant) << ',' << objective_name(r.objective) << ',' << r.seed
        << ',' << fixed(r.solve_time_s, 4) << "\n";
  }
}

void write_aggregate_csv(const std::vector<SolutionReport>& rows, std::ostream& out) {
  struct Agg {
    Mean car1, car2, other, total, savings, tpc1, tpc2, time;
    int errors = 0, timeouts = 0, invalid = 0;
  };
  std::map<std::tuple<int, int, int, int, int>, Agg> groups;
  for (const auto& r : rows) {
    Agg& a = groups[{static_cast<int>(r.variant), static_cast<int>(r.objective),
                     static_cast<int>(r.model), r.users, r.fleet}];
    if (!r.error.empty()) {
      ++a.errors;
      continue;
    }
    a.car1.add(r.cost_car_type1);
    a.car2.add(r.cost_car_type2);
    a.other.add(r.cost_other_mots);
    a.total.add(r.cost_total);
    a.savings.add(r.savings);
    if (r.trips_car_type1 > 0) a.tpc1.add(r.trips_per_car_type1);
    if (r.trips_car_type2 > 0) a.tpc2.add(r.trips_per_car_type2);
    a.time.add(r.solve_time_s);
    a.timeouts += r.timed_out();
    a.invalid += !r.valid;
  }
  out << "variant,objective,model,users,fleet,runs,cost_car_type1,cost_car_type2,cost_other_mots,"
         "cost_total,savings,car_share,trips_per_car_type1,trips_per_car_type2,mean_solve_time_s,"
         "timeouts,invalid,errors\n";
  for (const auto& [key, a] : groups) {
    const auto [variant, objective, model, users, fleet] = key;
    const double total = a.total.value();
    const double share = total > 0 ? (a.car1.value() + a.car2.value()) / total : 0.0;
    out << pref_variant_name(static_cast<PrefVariant>(variant)) << ','
        << objective_name(static_cast<Objective>(objective)) << ','
        << model_name(static_cast<Model>(model)) << ',' << users << ',' << fleet << ','
        << a.total.n << ',' << eur(a.car1.value()) << ',' << eur(a.car2.value()) << ','
        << eur(a.other.value()) << ',' << eur(total) << ',' << eur(a.savings.value()) << ','
        << fixed(share, 2) << ',' << fixed(a.tpc1.value(), 1) << ',' << fixed(a.tpc2.value(), 1)
        << ',' << fixed(a.time.value(), 3) << ',' << a.timeouts << ',' << a.invalid << ','
        << a.errors << "\n";
  }
}

void write_model_comparison_csv(const std::vector<SolutionReport>& rows, std::ostream& out) {
  std::map<std::tuple<int, int, int>, std::map<Model, Mean>> groups;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    groups[{static_cast<int>(r.variant), static_cast<int>(r.objective), r.users}][r.model].add(
        r.cost_total);
  }
  out << "variant,objective,users,mf_c,mf_c_comp,mf_e,mf_e_comp,mmc,mmc_comp\n";
  for (const auto& [key, by_model] : groups) {
    const auto [variant, objective, users] = key;
    auto mean = [&](Model m) {
      const auto it = by_model.find(m);
      return it == by_model.end() ? 0.0 : it->second.value();
    };
    const double e = mean(Model::kMfE);
    auto comp = [&](double x) { return e > 0 ? fixed(x / e, 2) : std::string(""); };
    out << pref_variant_name(static_cast<PrefVariant>(variant)) << ','
        << objective_name(static_cast<Objective>(objective)) << ',' << users << ','
        << eur(mean(Model::kMfC)) << ',' << comp(mean(Model::kMfC)) << ',' << eur(e) << ','
        << comp(e) << ',' << eur(mean(Model::kMmc)) << ',' << comp(mean(Model::kMmc)) << "\n";
  }
}

void write_grid_outputs(const std::vector<SolutionReport>& rows, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "plots");
  auto open = [&](const fs::path& p) {
    std::ofstream f(fs::path(dir) / p);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / p).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_reports_csv(rows, f);
  }
  {
    auto f = open("timings.csv");
    write_timings_csv(rows, f);
  }
  {
    auto f = open("aggregate.csv");
    write_aggregate_csv(rows, f);
  }
  {
    auto f = open("comparison.csv");
    write_model_comparison_csv(rows, f);
  }

  // Cost split per model (bars: cars, other MOTs, negated savings) and
  // total cost per fleet size for every model at each company size.
  std::map<std::tuple<int, int, int>, std::map<std::pair<int, int>, std::array<Mean, 4>>> split;
  std::map<std::tuple<int, int, int>, std::map<int, std::map<Model, Mean>>> totals;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    auto& s = split[{static_cast<int>(r.model), static_cast<int>(r.variant),
                     static_cast<int>(r.objective)}][{r.users, r.fleet}];
    s[0].add(r.cost_car_type1);
    s[1].add(r.cost_car_type2);
    s[2].add(r.cost_other_mots);
    s[3].add(-r.savings);
    totals[{r.users, static_cast<int>(r.variant), static_cast<int>(r.objective)}][r.fleet][r.model]
        .add(r.cost_total);
  }
  for (const auto& [key, series] : split) {
    const auto [model, variant, objective] = key;
    std::string name(model_name(static_cast<Model>(model)));
    std::replace(name.begin(), name.end(), '-', '_');
    auto f = open(fs::path("plots") / ("cost_split_" + name + "_" +
                                       std::string(pref_variant_name(static_cast<PrefVariant>(variant))) +
                                       "_" + std::string(objective_name(static_cast<Objective>(objective))) +
                                       ".dat"));
    f << "# users fleet cost_car_type1 cost_car_type2 cost_other_mots neg_savings\n";
    for (const auto& [uf, m] : series) {
      f << uf.first << ' ' << uf.second << ' ' << eur(m[0].value()) << ' ' << eur(m[1].value())
        << ' ' << eur(m[2].value()) << ' ' << eur(m[3].value()) << "\n";
    }
  }
  for (const auto& [key, by_fleet] : totals) {
    const auto [users, variant, objective] = key;
    auto f = open(fs::path("plots") /
                  ("totals_u" + std::to_string(users) + "_" +
                   std::string(pref_variant_name(static_cast<PrefVariant>(variant))) + "_" +
                   std::string(objective_name(static_cast<Objective>(objective))) + ".dat"));
    f << "# fleet";
    for (Model m : kAllModels) f << ' ' << model_name(m);
    f << "\n";
    for (const auto& [fleet, by_model] : by_fleet) {
      f << fleet;
      for (Model m : kAllModels) {
        const auto it = by_model.find(m);
        f << ' ' << (it == by_model.end() ? std::string("nan") : eur(it->second.value()));
      }
      f << "\n";
    }
  }
}

}  // namespace vshare
