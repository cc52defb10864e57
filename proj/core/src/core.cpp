#include "hvaclab/core.hpp"

#include <algorithm>
#include <cmath>

namespace hvaclab {

const char* to_string(Building b) {
  switch (b) {
    case Building::OfficeSmall: return "OfficeSmall";
    case Building::OfficeMedium: return "OfficeMedium";
    case Building::OfficeLarge: return "OfficeLarge";
  }
  return "?";
}

const char* to_string(Weather w) {
  switch (w) {
    case Weather::ColdDry: return "ColdDry";
    case Weather::CoolDry: return "CoolDry";
    case Weather::WarmDry: return "WarmDry";
    case Weather::MixedDry: return "MixedDry";
  }
  return "?";
}

Building building_from_string(const std::string& s) {
  if (s == "OfficeSmall") return Building::OfficeSmall;
  if (s == "OfficeMedium") return Building::OfficeMedium;
  if (s == "OfficeLarge") return Building::OfficeLarge;
  throw ConfigError("unknown building: " + s);
}

Weather weather_from_string(const std::string& s) {
  if (s == "ColdDry") return Weather::ColdDry;
  if (s == "CoolDry") return Weather::CoolDry;
  if (s == "WarmDry") return Weather::WarmDry;
  if (s == "MixedDry") return Weather::MixedDry;
  throw ConfigError("unknown weather: " + s);
}

std::vector<double> StateVector::flat() const {
  std::vector<double> out = room_temps;
  out.push_back(outside_temp);
  out.push_back(ghi);
  out.push_back(ground_temp);
  out.push_back(occupant_power);
  return out;
}

void StateVector::validate() const {
  if (room_temps.empty()) throw DimensionError("state needs at least one room");
  if (ghi < 0.0) throw ValueError("ghi must be >= 0");
  if (occupant_power < 0.0) throw ValueError("occupant_power must be >= 0");
  for (double t : room_temps) {
    if (!std::isfinite(t)) throw ValueError("non-finite room temperature");
  }
}

void ScenarioConfig::validate() const {
  if (episode_len <= 0) throw ConfigError("episode_len must be > 0");
  if (alpha <= 0.0) throw ConfigError("alpha must be > 0");
  if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
  if (target_temp <= 0.0) throw ConfigError("target_temp must be > 0");
}

RewardParts reward(const StateVector& state_after, const ActionVector& action,
                   const ScenarioConfig& cfg) {
  const std::size_t n = state_after.n_rooms();
  if (action.size() != n) {
    throw DimensionError("reward: action has " + std::to_string(action.size()) +
                         " components for " + std::to_string(n) + " rooms");
  }
  double abs_sum = 0.0;
  for (double a : action.values) abs_sum += std::abs(a);
  double sq_sum = 0.0;
  for (double t : state_after.room_temps) {
    const double d = t - cfg.target_temp;
    sq_sum += d * d;
  }
  RewardParts parts;
  parts.energy_term = 1.0 - abs_sum / static_cast<double>(n);
  parts.comfort_term = 1.0 - sq_sum / (cfg.target_temp * static_cast<double>(n));
  parts.reward = parts.energy_term + cfg.alpha * parts.comfort_term;
  return parts;
}

ActionVector validate_action(const std::vector<double>& raw, std::size_t n) {
  if (raw.size() != n) {
    throw DimensionError("action has " + std::to_string(raw.size()) +
                         " components, expected " + std::to_string(n));
  }
  ActionVector out;
  out.values.reserve(n);
  for (double v : raw) out.values.push_back(std::clamp(v, -1.0, 1.0));
  return out;
}

}  // namespace hvaclab
