#include "vshare/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "vshare/cost_model.hpp"
#include "vshare/trip_graph.hpp"

namespace vshare {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

namespace {

// Mean trips per user by company size.
constexpr std::array<std::pair<int, double>, 7> kTripsPerUser = {{
    {20, 1.54}, {50, 1.52}, {100, 1.47}, {150, 1.45}, {200, 1.44}, {250, 1.43}, {300, 1.42},
}};

int stochastic_round(double x, Rng& rng) {
  const double f = std::floor(x);
  return static_cast<int>(f) + (rng.bernoulli(x - f) ? 1 : 0);
}

int draw_depot(int home, int num_depots, double home_prob, Rng& rng) {
  if (num_depots == 1 || rng.bernoulli(home_prob)) return home;
  const int other = rng.uniform_int(0, num_depots - 2);
  return other >= home ? other + 1 : other;
}

Point draw_point(double lo, double hi, Rng& rng) {
  const double x = rng.uniform(lo, hi);
  const double y = rng.uniform(lo, hi);
  return {x, y};
}

// Car travel time per leg, the slower of the shared modes.
double car_minutes(const Instance& in, const Point& a, const Point& b) {
  double t = 0.0;
  for (Mode mode : in.mot_table.shared_modes()) {
    const MotParams& m = in.mot_table[mode];
    t = std::max(t, leg_travel_time_min(aerial_km(a, b), m));
  }
  return t;
}

bool car_feasible(const Instance& in, const Trip& trip) {
  for (Mode mode : in.mot_table.shared_modes()) {
    const MotParams& m = in.mot_table[mode];
    if (!schedule_trip(trip, in.depots, m)) return false;
  }
  return true;
}

// Fills trip.tasks so that the whole car tour fits in [begin, end]. Returns
// false when the drawn tour is too long for the window.
bool draw_tour(const Instance& in, Trip& trip, double begin, double end, int num_tasks,
               const GeneratorConfig& cfg, Rng& rng) {
  const Point origin = in.depots[trip.origin_depot].location;
  const Point dest = in.depots[trip.dest_depot].location;
  trip.tasks.clear();
  Point at = origin;
  double t = 0.0;
  for (int i = 0; i < num_tasks; ++i) {
    Task q;
    q.location = draw_point(0.0, cfg.plane_km, rng);
    q.duration_min = rng.uniform_int(cfg.min_duration_min, cfg.max_duration_min);
    t += car_minutes(in, at, q.location);
    if (i > 0) t += rng.uniform(0.0, cfg.max_slack_min);
    q.latest_arrival_min = t;
    t += q.duration_min;
    at = q.location;
    trip.tasks.push_back(q);
  }
  const double span = t + car_minutes(in, at, dest);
  if (span > end - begin) return false;
  const double offset = begin + rng.uniform(0.0, end - begin - span);
  for (Task& q : trip.tasks) q.latest_arrival_min += offset;
  const auto s = schedule_trip(trip, in.depots, in.mot_table[Mode::kCarType1]);
  return s && s->end_min <= end + 1e-9 && car_feasible(in, trip);
}

}  // namespace

double target_trips_per_user(int num_users) {
  if (num_users <= kTripsPerUser.front().first) return kTripsPerUser.front().second;
  for (std::size_t i = 1; i < kTripsPerUser.size(); ++i) {
    const auto [u1, v1] = kTripsPerUser[i];
    if (num_users <= u1) {
      const auto [u0, v0] = kTripsPerUser[i - 1];
      return v0 + (v1 - v0) * (num_users - u0) / double(u1 - u0);
    }
  }
  return kTripsPerUser.back().second;
}

void validate(const GeneratorConfig& c) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("generator: " + what); };
  if (c.num_depots < 1) fail("need at least one depot");
  if (!(c.plane_km > 0.0)) fail("plane size must be positive");
  if (!(c.depot_region > 0.0 && c.depot_region <= 1.0)) fail("depot region must be in (0, 1]");
  if (!(c.day_start_min >= 0.0 && c.day_end_min < 1440.0 && c.day_start_min < c.day_end_min)) {
    fail("working window must lie inside the day");
  }
  if (c.min_tasks < 1 || c.max_tasks < c.min_tasks) fail("bad task count range");
  if (c.min_duration_min < 0 || c.max_duration_min < c.min_duration_min) {
    fail("bad task duration range");
  }
  if (c.max_slack_min < 0.0) fail("slack must be >= 0");
  if (!(c.home_depot_prob >= 0.0 && c.home_depot_prob <= 1.0)) fail("bad home depot probability");
  if (c.max_attempts < 1) fail("need at least one attempt");
  // Three trips share the window; the shortest possible tour must fit a slot.
  const double slot = (c.day_end_min - c.day_start_min) / 3.0;
  if (c.min_tasks * double(c.min_duration_min) >= slot) {
    throw GeneratorError("working window cannot host three trips of minimal length");
  }
}

Instance generate_instance(std::uint64_t seed, int num_users, const GeneratorConfig& cfg) {
  if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
  validate(cfg);
  Rng rng(seed);
  Instance in;
  in.seed = seed;

  const double lo = cfg.plane_km * (1.0 - cfg.depot_region) / 2.0;
  const double hi = cfg.plane_km - lo;
  for (int d = 0; d < cfg.num_depots; ++d) {
    Depot depot;
    depot.id = d;
    depot.location = draw_point(lo, hi, rng);
    in.depots.push_back(depot);
  }

  // Trip counts by quota so the mean follows the target closely; the
  // counts are then dealt out to users in random order.
  const double extra = target_trips_per_user(num_users) - 1.0;
  const int n3 = std::min(num_users, stochastic_round(extra / 4.0 * num_users, rng));
  const int n2 = std::min(num_users - n3, stochastic_round(extra / 2.0 * num_users, rng));
  std::vector<int> counts(num_users, 1);
  std::fill(counts.begin(), counts.begin() + n3, 3);
  std::fill(counts.begin() + n3, counts.begin() + n3 + n2, 2);
  for (int i = num_users - 1; i > 0; --i) std::swap(counts[i], counts[rng.uniform_int(0, i)]);

  for (int p = 0; p < num_users; ++p) {
    User user;
    user.id = p;
    user.home_depot = rng.uniform_int(0, cfg.num_depots - 1);
    in.users.push_back(user);

    const double slot = (cfg.day_end_min - cfg.day_start_min) / counts[p];
    for (int j = 0; j < counts[p]; ++j) {
      const double begin = cfg.day_start_min + j * slot;
      Trip trip;
      trip.id = static_cast<int>(in.trips.size());
      trip.user = p;
      bool ok = false;
      for (int attempt = 0; attempt < cfg.max_attempts && !ok; ++attempt) {
        trip.origin_depot = draw_depot(user.home_depot, cfg.num_depots, cfg.home_depot_prob, rng);
        trip.dest_depot = draw_depot(user.home_depot, cfg.num_depots, cfg.home_depot_prob, rng);
        const int n = rng.uniform_int(cfg.min_tasks, cfg.max_tasks);
        ok = draw_tour(in, trip, begin, begin + slot, n, cfg, rng);
      }
      if (!ok) {
        throw GeneratorError("no schedulable trip for user " + std::to_string(p) + " after " +
                             std::to_string(cfg.max_attempts) + " attempts");
      }
      in.trips.push_back(std::move(trip));
    }
  }
  sync_trip_modes(in);
  validate(in);
  return in;
}

std::string_view pref_variant_name(PrefVariant v) {
  static constexpr std::array<std::string_view, 8> kNames = {
      "none", "prefVar0", "prefVar1", "prefVar2", "prefVar3", "prefVar4", "prefVar5", "prefVar6"};
  return kNames[static_cast<int>(v)];
}

std::optional<PrefVariant> parse_pref_variant(std::string_view name) {
  for (int i = 0; i < 8; ++i) {
    const auto v = static_cast<PrefVariant>(i);
    if (pref_variant_name(v) == name) return v;
  }
  return std::nullopt;
}

PrefShares pref_shares(PrefVariant v) {
  switch (v) {
    case PrefVariant::kNone:
      return {100, 0, 0};
    case PrefVariant::kPrefVar1:
      return {40, 40, 20};
    case PrefVariant::kPrefVar2:
      return {10, 10, 80};
    case PrefVariant::kPrefVar3:
      return {25, 25, 50};
    case PrefVariant::kPrefVar4:
      return {0, 80, 20};
    case PrefVariant::kPrefVar5:
      return {0, 20, 80};
    case PrefVariant::kPrefVar6:
      return {0, 50, 50};
    case PrefVariant::kPrefVar0:
      break;
  }
  throw std::invalid_argument("prefVar0 has no fixed shares");
}

namespace {

ModeSet of(std::initializer_list<Mode> modes) {
  ModeSet s;
  for (Mode m : modes) s.insert(m);
  return s;
}

}  // namespace

ModeSet cars_only_modes() { return of({Mode::kCarType1, Mode::kCarType2, Mode::kTaxi}); }

ModeSet no_cars_modes() {
  return of({Mode::kWalk, Mode::kBike, Mode::kPublicTransport, Mode::kTaxi});
}

ModeSet category_modes(PrefCategory c) {
  switch (c) {
    case PrefCategory::kGeneric:
      return ModeSet::all();
    case PrefCategory::kMotorisedOnly:
      return of({Mode::kCarType1, Mode::kCarType2, Mode::kTaxi, Mode::kPublicTransport});
    case PrefCategory::kNoPublicTransport: {
      ModeSet s = ModeSet::all();
      s.erase(Mode::kPublicTransport);
      return s;
    }
    case PrefCategory::kNoMotorised:
      return of({Mode::kWalk, Mode::kBike});
    case PrefCategory::kCarsOnly:
      return of({Mode::kCarType1, Mode::kCarType2, Mode::kTaxi});
    case PrefCategory::kPublicTransportOnly:
      return of({Mode::kPublicTransport, Mode::kWalk});
    case PrefCategory::kBikeOnly:
      return of({Mode::kBike, Mode::kWalk});
  }
  throw std::invalid_argument("unknown preference category");
}

const std::array<double, kNumPrefCategories>& category_probabilities(bool male) {
  static constexpr std::array<double, kNumPrefCategories> kFemale = {0.19, 0.03, 0.01, 0.04,
                                                                     0.18, 0.42, 0.13};
  static constexpr std::array<double, kNumPrefCategories> kMale = {0.18, 0.03, 0.02, 0.03,
                                                                   0.26, 0.35, 0.13};
  return male ? kMale : kFemale;
}

Prefvar0Draw draw_prefvar0_user(Rng& rng) {
  constexpr double kMaleShare = 0.53;
  constexpr double kLicenseShare = 0.87;
  Prefvar0Draw d;
  d.male = rng.bernoulli(kMaleShare);
  const auto& probs = category_probabilities(d.male);
  const double r = rng.uniform();
  double acc = 0.0;
  int c = kNumPrefCategories - 1;
  for (int i = 0; i < kNumPrefCategories; ++i) {
    acc += probs[i];
    if (r < acc) {
      c = i;
      break;
    }
  }
  d.category = static_cast<PrefCategory>(c);
  d.license = rng.bernoulli(kLicenseShare);
  d.modes = category_modes(d.category);
  if (!d.license) {
    d.modes.erase(Mode::kCarType1);
    d.modes.erase(Mode::kCarType2);
  }
  return d;
}

Instance assign_preferences(const Instance& instance, PrefVariant variant, std::uint64_t seed) {
  Instance out = instance;
  const int u = static_cast<int>(out.users.size());
  if (variant == PrefVariant::kPrefVar0) {
    Rng rng(seed);
    for (User& user : out.users) user.allowed_mots = draw_prefvar0_user(rng).modes;
  } else {
    const PrefShares s = pref_shares(variant);
    const int all_end = (s.all * u + 99) / 100;
    const int cars_end = std::min(u, ((s.all + s.cars_only) * u + 99) / 100);
    for (int p = 0; p < u; ++p) {
      out.users[p].allowed_mots = p < all_end    ? ModeSet::all()
                                  : p < cars_end ? cars_only_modes()
                                                 : no_cars_modes();
    }
  }
  sync_trip_modes(out);
  return out;
}

Instance random_small_instance(std::uint64_t seed, const SmallInstanceConfig& cfg) {
  if (cfg.num_trips < 0 || cfg.num_depots < 1) throw std::invalid_argument("bad small instance");
  Rng rng(seed);
  Instance in;
  in.seed = seed;
  for (int d = 0; d < cfg.num_depots; ++d) {
    Depot depot;
    depot.id = d;
    depot.location = draw_point(0.0, cfg.plane_km, rng);
    in.depots.push_back(depot);
  }
  GeneratorConfig gen;
  gen.plane_km = cfg.plane_km;
  gen.max_tasks = 2;
  gen.max_duration_min = 90;
  for (int t = 0; t < cfg.num_trips; ++t) {
    User user;
    user.id = t;
    user.home_depot = rng.uniform_int(0, cfg.num_depots - 1);
    if (rng.bernoulli(cfg.restrict_prob)) {
      user.allowed_mots.erase(rng.bernoulli(0.5) ? Mode::kCarType1 : Mode::kCarType2);
    }
    in.users.push_back(user);
    Trip trip;
    trip.id = t;
    trip.user = t;
    bool ok = false;
    for (int attempt = 0; attempt < gen.max_attempts && !ok; ++attempt) {
      trip.origin_depot = rng.uniform_int(0, cfg.num_depots - 1);
      trip.dest_depot = rng.uniform_int(0, cfg.num_depots - 1);
      ok = draw_tour(in, trip, cfg.day_start_min, cfg.day_end_min, rng.uniform_int(1, 2), gen, rng);
    }
    if (!ok) throw GeneratorError("could not place a small trip");
    in.trips.push_back(std::move(trip));
  }
  sync_trip_modes(in);
  validate(in);
  return in;
}

}  // namespace vshare
