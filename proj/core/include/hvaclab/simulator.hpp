#pragma once

#include <cstdint>
#include <vector>

#include "hvaclab/core.hpp"

// Discrete-time multi-room thermal model: a first-order RC network integrated
// with an explicit Euler step of one hour. Default building and weather
// catalogs are compiled in; both can be overridden from a plain-text file.

namespace hvaclab {

struct BuildingParams {
  std::size_t n_rooms = 0;
  std::vector<std::vector<double>> adjacency;  // W/degC, symmetric, zero diagonal
  std::vector<double> u_out;                   // envelope conductance, W/degC
  std::vector<double> u_ground;                // ground conductance, W/degC
  std::vector<double> heat_capacity;           // J/degC
  std::vector<double> p_max;                   // HVAC power, W
  std::vector<double> solar_gain;              // effective aperture, m^2
  std::vector<double> occ_share;               // fraction of occupant power, sums to 1

  // Shape, sign and explicit-Euler stability checks; throws ConfigError.
  void validate() const;
};

struct WeatherParams {
  double mean_temp = 0.0;        // degC
  double daily_amplitude = 0.0;  // degC
  double ghi_peak = 0.0;         // W/m^2
  double ground_temp = 0.0;      // degC
  double occupant_peak = 0.0;    // W

  void validate() const;
};

struct Catalog {
  std::vector<std::pair<Building, BuildingParams>> buildings;
  std::vector<std::pair<Weather, WeatherParams>> weathers;

  const BuildingParams& building(Building b) const;
  const WeatherParams& weather(Weather w) const;

  static const Catalog& defaults();
  // Defaults overridden by [building.X] / [weather.Y] sections from `path`.
  static Catalog from_file(const std::string& path);
};

struct Exogenous {
  double outside_temp = 0.0;
  double ghi = 0.0;
  double ground_temp = 0.0;
  double occupant_power = 0.0;
};

// Hourly profile; hour of day = step mod 24. Noise (sigma > 0) perturbs the
// outside temperature only and is drawn from a per-step stream derived from
// noise_seed, so any future step can be queried without replaying the past.
Exogenous weather_at(const WeatherParams& w, int step, double sigma,
                     std::uint64_t noise_seed);

struct Episode {
  ScenarioConfig cfg;
  int step_index = 0;
  StateVector state;
  std::uint64_t noise_seed = 0;  // stream id for weather noise

  bool finished() const { return step_index >= cfg.episode_len; }
};

class Simulator {
 public:
  // Catalog lookup for cfg.building / cfg.weather.
  explicit Simulator(const ScenarioConfig& cfg, const Catalog& catalog = Catalog::defaults());
  Simulator(BuildingParams building, WeatherParams weather);

  const BuildingParams& building() const { return building_; }
  const WeatherParams& weather() const { return weather_; }
  std::size_t n_rooms() const { return building_.n_rooms; }

  // Deterministic in cfg.seed: room temperatures uniform in
  // [target - 4, target + 4], exogenous fields from weather_at(0).
  Episode reset(const ScenarioConfig& cfg) const;

  // Advances the episode in place; throws StateError once finished.
  StepOutcome step(Episode& ep, const ActionVector& action) const;

  // Pure dynamics core, also used by planning rollouts: applies `action` to
  // `state` at step index `step`, refreshing exogenous fields for step + 1.
  StepOutcome step_state(const StateVector& state, const ActionVector& action,
                         int step, const ScenarioConfig& cfg) const;

  Exogenous exogenous_at(int step, const ScenarioConfig& cfg) const;

  static std::uint64_t noise_seed_for(const ScenarioConfig& cfg);

 private:
  BuildingParams building_;
  WeatherParams weather_;
};

}  // namespace hvaclab
