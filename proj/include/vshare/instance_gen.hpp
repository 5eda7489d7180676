// Seeded synthetic instances: two depots on a square plane, users with one
// to three trips over a working day, and the MOT-preference variants.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>

#include "vshare/instance.hpp"

namespace vshare {

// Uniform draws on top of a fixed engine, so streams are identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  int uniform_int(int lo, int hi);        // inclusive
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorConfig {
  int num_depots = 2;
  double plane_km = 20.0;
  double depot_region = 0.5;  // depots lie in the central share of the plane
  double day_start_min = 420.0;
  double day_end_min = 1140.0;
  int min_tasks = 1;
  int max_tasks = 4;
  int min_duration_min = 30;
  int max_duration_min = 120;
  double max_slack_min = 60.0;  // idle time drawn between consecutive tasks
  double home_depot_prob = 0.8;
  int max_attempts = 1000;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mean trips per user the generator aims for at u users.
double target_trips_per_user(int num_users);

void validate(const GeneratorConfig& config);

// Depot supplies are left empty; the harness sets fleets per scenario.
Instance generate_instance(std::uint64_t seed, int num_users, const GeneratorConfig& config = {});

enum class PrefVariant : std::uint8_t {
  kNone,
  kPrefVar0,
  kPrefVar1,
  kPrefVar2,
  kPrefVar3,
  kPrefVar4,
  kPrefVar5,
  kPrefVar6,
};

std::string_view pref_variant_name(PrefVariant v);  // "none", "prefVar0", ...
std::optional<PrefVariant> parse_pref_variant(std::string_view name);

// Percentages of users per block for the fixed variants.
struct PrefShares {
  int all = 100;
  int cars_only = 0;
  int no_cars = 0;
};

PrefShares pref_shares(PrefVariant v);  // prefVar1..6 and None

// The seven demographic categories of prefVar0.
enum class PrefCategory : std::uint8_t {
  kGeneric,
  kMotorisedOnly,
  kNoPublicTransport,
  kNoMotorised,
  kCarsOnly,
  kPublicTransportOnly,
  kBikeOnly,
};

inline constexpr int kNumPrefCategories = 7;

ModeSet category_modes(PrefCategory c);
const std::array<double, kNumPrefCategories>& category_probabilities(bool male);
ModeSet cars_only_modes();
ModeSet no_cars_modes();

// Draws one prefVar0 user: sex, category, then driving license.
struct Prefvar0Draw {
  bool male = false;
  PrefCategory category = PrefCategory::kGeneric;
  bool license = true;
  ModeSet modes;
};

Prefvar0Draw draw_prefvar0_user(Rng& rng);

// Returns a copy with every user's mode set replaced and trips synced.
Instance assign_preferences(const Instance& instance, PrefVariant variant, std::uint64_t seed);

// Small random instance for solver cross-checks: a separate user per trip,
// one or two tasks, optionally restricted mode sets.
struct SmallInstanceConfig {
  int num_trips = 6;
  int num_depots = 2;
  double plane_km = 12.0;
  double day_start_min = 420.0;
  double day_end_min = 1140.0;
  double restrict_prob = 0.0;  // chance a user drops one car type
};

Instance random_small_instance(std::uint64_t seed, const SmallInstanceConfig& config = {});

}  // namespace vshare
