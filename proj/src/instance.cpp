#include "vshare/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vshare {

using nlohmann::json;

namespace {

Mode mode_from_json(const json& j) {
  const auto name = j.get<std::string>();
  auto m = parse_mode(name);
  if (!m) throw InvalidInstance("unknown mode '" + name + "'");
  return *m;
}

json mot_row_to_json(const MotParams& p) {
  return json{{"mode", mode_name(p.mode)},
              {"sloping_factor", p.sloping_factor},
              {"emissions_g_per_km", p.emissions_g_per_km},
              {"speed_kmh", p.avg_speed_kmh},
              {"cost_per_km", p.cost_per_km},
              {"setup_min", p.setup_time_min},
              {"shared", p.shared}};
}

json mot_table_to_json(const MotTable& table) {
  json rows = json::array();
  for (const MotParams& p : table.rows()) rows.push_back(mot_row_to_json(p));
  return rows;
}

MotTable mot_table_from_json(const json& j) {
  if (!j.is_array() || j.size() != kNumModes) {
    throw InvalidParameters("mot table must list all six modes");
  }
  std::array<MotParams, kNumModes> rows{};
  std::array<bool, kNumModes> seen{};
  for (const json& r : j) {
    MotParams p;
    p.mode = mode_from_json(r.at("mode"));
    p.sloping_factor = r.at("sloping_factor").get<double>();
    p.emissions_g_per_km = r.at("emissions_g_per_km").get<double>();
    p.avg_speed_kmh = r.at("speed_kmh").get<double>();
    p.cost_per_km = r.at("cost_per_km").get<double>();
    p.setup_time_min = r.at("setup_min").get<double>();
    p.shared = r.at("shared").get<bool>();
    const int idx = mode_index(p.mode);
    if (seen[idx]) throw InvalidParameters("duplicate mot table row");
    seen[idx] = true;
    rows[idx] = p;
  }
  return MotTable(rows);
}

json modes_to_json(const ModeSet& s) {
  json out = json::array();
  for (Mode m : s.modes()) out.push_back(mode_name(m));
  return out;
}

ModeSet modes_from_json(const json& j) {
  ModeSet s;
  for (const json& m : j) s.insert(mode_from_json(m));
  return s;
}

json instance_to_json(const Instance& in) {
  json depots = json::array();
  for (const Depot& d : in.depots) {
    json supply = json::object();
    for (const auto& [mode, count] : d.supply) supply[std::string(mode_name(mode))] = count;
    depots.push_back(
        {{"id", d.id}, {"x_km", d.location.x_km}, {"y_km", d.location.y_km}, {"supply", supply}});
  }
  json users = json::array();
  for (const User& u : in.users) {
    users.push_back({{"id", u.id}, {"mots", modes_to_json(u.allowed_mots)}, {"home_depot", u.home_depot}});
  }
  json trips = json::array();
  for (const Trip& t : in.trips) {
    json tasks = json::array();
    for (const Task& q : t.tasks) {
      tasks.push_back({{"x_km", q.location.x_km},
                       {"y_km", q.location.y_km},
                       {"latest_arrival_min", q.latest_arrival_min},
                       {"duration_min", q.duration_min}});
    }
    trips.push_back({{"id", t.id},
                     {"user", t.user},
                     {"origin", t.origin_depot},
                     {"dest", t.dest_depot},
                     {"tasks", tasks}});
  }
  return json{{"version", in.version},
              {"seed", in.seed},
              {"depots", depots},
              {"users", users},
              {"trips", trips},
              {"mot_table", mot_table_to_json(in.mot_table)},
              {"cost_config",
               {{"cost_per_time_eur_per_h", in.cost_config.cost_per_time_eur_per_h},
                {"co2_cost_eur_per_tonne", in.cost_config.co2_cost_eur_per_tonne},
                {"objective", objective_name(in.cost_config.objective)}}}};
}

Instance instance_from_json(const json& j) {
  Instance in;
  in.version = j.at("version").get<int>();
  if (in.version != kInstanceSchemaVersion) {
    throw InvalidInstance("unsupported instance schema version " + std::to_string(in.version));
  }
  in.seed = j.at("seed").get<std::uint64_t>();
  for (const json& d : j.at("depots")) {
    Depot depot;
    depot.id = d.at("id").get<int>();
    depot.location = {d.at("x_km").get<double>(), d.at("y_km").get<double>()};
    for (const auto& [name, count] : d.at("supply").items()) {
      auto m = parse_mode(name);
      if (!m) throw InvalidInstance("unknown mode '" + name + "' in depot supply");
      depot.supply[*m] = count.get<int>();
    }
    in.depots.push_back(std::move(depot));
  }
  for (const json& u : j.at("users")) {
    in.users.push_back({u.at("id").get<int>(), modes_from_json(u.at("mots")),
                        u.at("home_depot").get<int>()});
  }
  for (const json& t : j.at("trips")) {
    Trip trip;
    trip.id = t.at("id").get<int>();
    trip.user = t.at("user").get<int>();
    trip.origin_depot = t.at("origin").get<int>();
    trip.dest_depot = t.at("dest").get<int>();
    for (const json& q : t.at("tasks")) {
      trip.tasks.push_back({{q.at("x_km").get<double>(), q.at("y_km").get<double>()},
                            q.at("latest_arrival_min").get<double>(),
                            q.at("duration_min").get<double>()});
    }
    in.trips.push_back(std::move(trip));
  }
  in.mot_table = mot_table_from_json(j.at("mot_table"));
  const json& cc = j.at("cost_config");
  in.cost_config.cost_per_time_eur_per_h = cc.at("cost_per_time_eur_per_h").get<double>();
  in.cost_config.co2_cost_eur_per_tonne = cc.at("co2_cost_eur_per_tonne").get<double>();
  auto obj = parse_objective(cc.at("objective").get<std::string>());
  if (!obj) throw InvalidInstance("unknown objective in cost_config");
  in.cost_config.objective = *obj;
  validate(in);
  sync_trip_modes(in);
  return in;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

double aerial_km(const Point& a, const Point& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

void validate(const Instance& in) {
  for (std::size_t i = 0; i < in.depots.size(); ++i) {
    if (in.depots[i].id != static_cast<int>(i)) throw InvalidInstance("depot ids must be dense");
    for (const auto& [mode, count] : in.depots[i].supply) {
      if (count < 0) throw InvalidInstance("negative depot supply");
      if (!in.mot_table[mode].shared) throw InvalidInstance("supply given for a non-shared mode");
    }
  }
  const int nd = static_cast<int>(in.depots.size());
  for (std::size_t i = 0; i < in.users.size(); ++i) {
    const User& u = in.users[i];
    if (u.id != static_cast<int>(i)) throw InvalidInstance("user ids must be dense");
    if (u.allowed_mots.empty()) throw InvalidInstance("user with an empty mode set");
    if (u.home_depot < 0 || u.home_depot >= nd) throw InvalidInstance("unknown home depot");
  }
  for (std::size_t i = 0; i < in.trips.size(); ++i) {
    const Trip& t = in.trips[i];
    if (t.id != static_cast<int>(i)) throw InvalidInstance("trip ids must be dense");
    if (t.user < 0 || t.user >= static_cast<int>(in.users.size())) {
      throw InvalidInstance("trip " + std::to_string(t.id) + " references an unknown user");
    }
    if (t.origin_depot < 0 || t.origin_depot >= nd || t.dest_depot < 0 || t.dest_depot >= nd) {
      throw InvalidInstance("trip " + std::to_string(t.id) + " references an unknown depot");
    }
    if (t.tasks.empty()) throw InvalidInstance("trip " + std::to_string(t.id) + " has no tasks");
    for (const Task& q : t.tasks) {
      if (!(q.latest_arrival_min >= 0.0 && q.latest_arrival_min < 1440.0) ||
          !(q.duration_min >= 0.0)) {
        throw InvalidInstance("trip " + std::to_string(t.id) + " has a malformed task");
      }
    }
  }
  validate(in.cost_config);
}

std::vector<double> leg_distances_km(const Trip& trip, std::span<const Depot> depots) {
  std::vector<double> legs;
  legs.reserve(trip.tasks.size() + 1);
  Point at = depots[trip.origin_depot].location;
  for (const Task& q : trip.tasks) {
    legs.push_back(aerial_km(at, q.location));
    at = q.location;
  }
  legs.push_back(aerial_km(at, depots[trip.dest_depot].location));
  return legs;
}

void sync_trip_modes(Instance& instance) {
  for (Trip& t : instance.trips) t.allowed_mots = instance.users[t.user].allowed_mots;
}

std::string serialize_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
  try {
    return instance_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("malformed instance json: ") + e.what());
  }
}

std::string serialize_mot_table(const MotTable& table) {
  return mot_table_to_json(table).dump(2) + "\n";
}

MotTable parse_mot_table(const std::string& text) {
  try {
    return mot_table_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidParameters(std::string("malformed mot table json: ") + e.what());
  }
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << serialize_instance(instance);
}

}  // namespace vshare
