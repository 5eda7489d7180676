#include "vshare/mode.hpp"

#include <cmath>
#include <string>

namespace vshare {

namespace {

constexpr std::array<std::string_view, kNumModes> kModeNames = {
    "walk", "bike", "car_type1", "car_type2", "public_transport", "taxi"};

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view mode_name(Mode mode) { return kModeNames[mode_index(mode)]; }

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : kAllModes) {
    if (kModeNames[mode_index(m)] == name) return m;
  }
  return std::nullopt;
}

std::vector<Mode> ModeSet::modes() const {
  std::vector<Mode> out;
  for (Mode m : kAllModes) {
    if (contains(m)) out.push_back(m);
  }
  return out;
}

MotTable MotTable::defaults() {
  // Taxi speed, sloping factor and emissions are not part of the reference
  // table; a taxi is treated as a combustion car.
  return MotTable({{
      {Mode::kWalk, 1.1, 0.0, 5.0, 0.0, 0.0, false},
      {Mode::kBike, 1.3, 0.0, 16.0, 0.0, 2.0, false},
      {Mode::kCarType1, 1.3, 200.9, 30.0, 0.188, 10.0, true},
      {Mode::kCarType2, 1.3, 42.7, 30.0, 0.094, 10.0, true},
      {Mode::kPublicTransport, 1.5, 0.0, 20.0, 0.0, 5.0, false},
      {Mode::kTaxi, 1.3, 200.9, 30.0, 1.2, 5.0, false},
  }});
}

MotTable::MotTable(const std::array<MotParams, kNumModes>& rows) : rows_(rows) {
  for (int i = 0; i < kNumModes; ++i) {
    if (mode_index(rows_[i].mode) != i) {
      throw InvalidParameters("mot table row " + std::to_string(i) +
                              " is out of mode order");
    }
    validate(rows_[i]);
  }
}

std::vector<Mode> MotTable::shared_modes() const {
  std::vector<Mode> out;
  for (const MotParams& p : rows_) {
    if (p.shared) out.push_back(p.mode);
  }
  return out;
}

void validate(const MotParams& p) {
  const std::string who(mode_name(p.mode));
  if (!std::isfinite(p.sloping_factor) || p.sloping_factor < 1.0) {
    throw InvalidParameters(who + ": sloping factor must be >= 1");
  }
  if (!std::isfinite(p.avg_speed_kmh) || p.avg_speed_kmh <= 0.0) {
    throw InvalidParameters(who + ": average speed must be > 0");
  }
  if (!finite_non_negative(p.emissions_g_per_km) ||
      !finite_non_negative(p.cost_per_km) ||
      !finite_non_negative(p.setup_time_min)) {
    throw InvalidParameters(who + ": emissions, cost and setup must be >= 0");
  }
}

std::string_view objective_name(Objective o) {
  return o == Objective::kBase ? "base" : "time";
}

std::optional<Objective> parse_objective(std::string_view name) {
  if (name == "base") return Objective::kBase;
  if (name == "time") return Objective::kTimeOnly;
  return std::nullopt;
}

void validate(const CostConfig& cfg) {
  if (!finite_non_negative(cfg.cost_per_time_eur_per_h) ||
      !finite_non_negative(cfg.co2_cost_eur_per_tonne)) {
    throw InvalidParameters("cost config: monetary rates must be >= 0");
  }
}

}  // namespace vshare
