// Problem instance: depots, users and their timed trips.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vshare/mode.hpp"

namespace vshare {

struct Point {
  double x_km = 0.0;
  double y_km = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double aerial_km(const Point& a, const Point& b);

// A meeting. Times are minutes since midnight.
struct Task {
  Point location;
  double latest_arrival_min = 0.0;
  double duration_min = 0.0;

  friend bool operator==(const Task&, const Task&) = default;
};

// A fixed-order tour of tasks from an origin depot to a destination depot.
// allowed_mots mirrors the owning user's set and is not serialized.
struct Trip {
  int id = 0;
  int user = 0;
  int origin_depot = 0;
  int dest_depot = 0;
  std::vector<Task> tasks;
  ModeSet allowed_mots = ModeSet::all();

  friend bool operator==(const Trip&, const Trip&) = default;
};

// Vehicles at a depot per shared mode; the same count must be back at the
// end of the day.
struct Depot {
  int id = 0;
  Point location;
  std::map<Mode, int> supply;

  friend bool operator==(const Depot&, const Depot&) = default;
};

struct User {
  int id = 0;
  ModeSet allowed_mots = ModeSet::all();
  int home_depot = 0;

  friend bool operator==(const User&, const User&) = default;
};

inline constexpr int kInstanceSchemaVersion = 1;

struct Instance {
  int version = kInstanceSchemaVersion;
  std::uint64_t seed = 0;
  std::vector<Depot> depots;
  std::vector<User> users;
  std::vector<Trip> trips;
  MotTable mot_table = MotTable::defaults();
  CostConfig cost_config;

  friend bool operator==(const Instance&, const Instance&) = default;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Checks ids are dense, references resolve and tasks are well formed.
void validate(const Instance& instance);

// Stop sequence distances o -> q1 -> ... -> qn -> e.
std::vector<double> leg_distances_km(const Trip& trip,
                                     std::span<const Depot> depots);

// Copies each user's mode set onto its trips.
void sync_trip_modes(Instance& instance);

// Canonical JSON (sorted keys, schema version) for instance.json.
std::string serialize_instance(const Instance& instance);
Instance parse_instance(const std::string& text);

std::string serialize_mot_table(const MotTable& table);
MotTable parse_mot_table(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace vshare
