#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvaclab/errors.hpp"

namespace hvaclab {

enum class Building { OfficeSmall, OfficeMedium, OfficeLarge };
enum class Weather { ColdDry, CoolDry, WarmDry, MixedDry };

const char* to_string(Building b);
const char* to_string(Weather w);
Building building_from_string(const std::string& s);  // throws ConfigError
Weather weather_from_string(const std::string& s);    // throws ConfigError

// Room temperatures plus the four exogenous readings; flat layout is
// [t_0 .. t_{n-1}, outside_temp, ghi, ground_temp, occupant_power].
struct StateVector {
  std::vector<double> room_temps;  // degC, one per room, n >= 1
  double outside_temp = 0.0;       // degC
  double ghi = 0.0;                // W/m^2, >= 0
  double ground_temp = 0.0;        // degC
  double occupant_power = 0.0;     // W, >= 0

  std::size_t n_rooms() const { return room_temps.size(); }
  std::vector<double> flat() const;
  void validate() const;  // throws ValueError / DimensionError

  bool operator==(const StateVector&) const = default;
};

// Valve commands in [-1, 1]; sign selects cooling (-) vs heating (+),
// magnitude is the valve opening (energy use).
struct ActionVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const ActionVector&) const = default;
};

struct ScenarioConfig {
  Building building = Building::OfficeMedium;
  Weather weather = Weather::CoolDry;
  double alpha = 0.5;          // comfort weight in the reward
  double target_temp = 22.0;   // degC
  int episode_len = 240;       // steps (1 step = 1 hour)
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;    // stddev of outside-temperature noise, degC

  void validate() const;  // throws ConfigError
};

struct StepOutcome {
  double reward = 0.0;
  StateVector next_state;
  double comfort_term = 0.0;
  double energy_term = 0.0;
};

struct RewardParts {
  double reward = 0.0;
  double energy_term = 0.0;
  double comfort_term = 0.0;
};

// reward = energy + alpha * comfort, with
//   energy  = 1 - sum(|a_i|) / n
//   comfort = 1 - sum((t_i - T)^2) / (T * n)
// evaluated on the post-action room temperatures.
RewardParts reward(const StateVector& state_after, const ActionVector& action,
                   const ScenarioConfig& cfg);

// Clamps each component into [-1, 1]; rejects wrong length.
ActionVector validate_action(const std::vector<double>& raw, std::size_t n);

}  // namespace hvaclab
