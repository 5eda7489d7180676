// Modes of transport and their physical/economic parameters.

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vshare {

enum class Mode : std::uint8_t {
  kWalk = 0,
  kBike,
  kCarType1,  // combustion engine car
  kCarType2,  // electric car
  kPublicTransport,
  kTaxi,
};

inline constexpr int kNumModes = 6;

inline constexpr std::array<Mode, kNumModes> kAllModes = {
    Mode::kWalk,   Mode::kBike,            Mode::kCarType1,
    Mode::kCarType2, Mode::kPublicTransport, Mode::kTaxi};

// Canonical lower-case names used in JSON and on the command line.
std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

constexpr int mode_index(Mode mode) { return static_cast<int>(mode); }

// Small value-type set of modes (the K^p / K^pi sets).
class ModeSet {
 public:
  constexpr ModeSet() = default;
  ModeSet(std::initializer_list<Mode> modes) {
    for (Mode m : modes) insert(m);
  }

  static ModeSet all() {
    ModeSet s;
    s.bits_.set();
    return s;
  }

  bool contains(Mode m) const { return bits_.test(mode_index(m)); }
  void insert(Mode m) { bits_.set(mode_index(m)); }
  void erase(Mode m) { bits_.reset(mode_index(m)); }
  bool empty() const { return bits_.none(); }
  int size() const { return static_cast<int>(bits_.count()); }

  // Members in enumeration order.
  std::vector<Mode> modes() const;

  friend bool operator==(const ModeSet&, const ModeSet&) = default;

 private:
  std::bitset<kNumModes> bits_;
};

struct MotParams {
  Mode mode = Mode::kWalk;
  double sloping_factor = 1.0;
  double emissions_g_per_km = 0.0;
  double avg_speed_kmh = 1.0;
  double cost_per_km = 0.0;
  double setup_time_min = 0.0;
  bool shared = false;

  friend bool operator==(const MotParams&, const MotParams&) = default;
};

class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One parameter row per mode. Indexing by Mode always succeeds.
class MotTable {
 public:
  // Values of the reference parameter table: foot, bike, two shared car
  // types, public transport and taxi.
  static MotTable defaults();

  explicit MotTable(const std::array<MotParams, kNumModes>& rows);

  const MotParams& operator[](Mode m) const { return rows_[mode_index(m)]; }
  const std::array<MotParams, kNumModes>& rows() const { return rows_; }

  std::vector<Mode> shared_modes() const;

  friend bool operator==(const MotTable&, const MotTable&) = default;

 private:
  std::array<MotParams, kNumModes> rows_;
};

// Throws InvalidParameters when a row breaks the physical invariants.
void validate(const MotParams& p);

enum class Objective : std::uint8_t { kBase, kTimeOnly };

std::string_view objective_name(Objective o);  // "base" / "time"
std::optional<Objective> parse_objective(std::string_view name);

struct CostConfig {
  double cost_per_time_eur_per_h = 19.42;
  double co2_cost_eur_per_tonne = 5.0;
  Objective objective = Objective::kBase;

  friend bool operator==(const CostConfig&, const CostConfig&) = default;
};

void validate(const CostConfig& cfg);

}  // namespace vshare
