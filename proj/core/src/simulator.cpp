#include "hvaclab/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "hvaclab/config_file.hpp"
#include "hvaclab/rng.hpp"

namespace hvaclab {

namespace {

constexpr double kStepSeconds = 3600.0;  // 1 step = 1 hour
constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kNoiseTag = 0x77454154u;  // weather noise stream
constexpr std::uint64_t kInitTag = 0x494e4954u;   // initial temperatures

// Chain topology with room 0 additionally coupled to every other room.
std::vector<std::vector<double>> chain_hub_adjacency(std::size_t n, double coupling) {
  std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    adj[i][i + 1] = coupling;
    adj[i + 1][i] = coupling;
  }
  for (std::size_t j = 2; j < n; ++j) {
    adj[0][j] = coupling;
    adj[j][0] = coupling;
  }
  return adj;
}

BuildingParams make_building(std::size_t n, double capacity, double u_out, double u_ground,
                             double coupling, double p_max, double solar) {
  BuildingParams p;
  p.n_rooms = n;
  p.adjacency = chain_hub_adjacency(n, coupling);
  p.u_out.assign(n, u_out);
  p.u_ground.assign(n, u_ground);
  p.heat_capacity.assign(n, capacity);
  p.p_max.assign(n, p_max);
  p.solar_gain.assign(n, solar);
  p.occ_share.assign(n, 1.0 / static_cast<double>(n));
  return p;
}

WeatherParams make_weather(double mean, double amplitude, double ghi_peak,
                           double occupant_peak) {
  WeatherParams w;
  w.mean_temp = mean;
  w.daily_amplitude = amplitude;
  w.ghi_peak = ghi_peak;
  w.ground_temp = 0.7 * mean;
  w.occupant_peak = occupant_peak;
  return w;
}

Catalog build_default_catalog() {
  Catalog cat;
  cat.buildings.emplace_back(Building::OfficeSmall,
                             make_building(4, 1.1e6, 55.0, 5.0, 10.0, 1200.0, 2.5));
  cat.buildings.emplace_back(Building::OfficeMedium,
                             make_building(7, 1.2e6, 55.0, 5.0, 10.0, 1100.0, 3.0));
  cat.buildings.emplace_back(Building::OfficeLarge,
                             make_building(12, 1.4e6, 60.0, 10.0, 10.0, 1100.0, 3.5));
  cat.weathers.emplace_back(Weather::ColdDry, make_weather(-5.0, 5.0, 400.0, 2000.0));
  cat.weathers.emplace_back(Weather::CoolDry, make_weather(8.0, 6.0, 500.0, 2000.0));
  cat.weathers.emplace_back(Weather::WarmDry, make_weather(26.0, 6.0, 800.0, 2000.0));
  cat.weathers.emplace_back(Weather::MixedDry, make_weather(15.0, 10.0, 650.0, 2000.0));
  for (const auto& [b, params] : cat.buildings) params.validate();
  for (const auto& [w, params] : cat.weathers) params.validate();
  return cat;
}

std::vector<double> per_room(const ConfigSection& s, const std::string& key,
                             std::size_t n, const std::vector<double>& fallback) {
  std::vector<double> vals = config_doubles(s, key);
  if (vals.empty()) return fallback;
  if (vals.size() == 1) return std::vector<double>(n, vals[0]);
  if (vals.size() != n) {
    throw ConfigError("'" + key + "' needs 1 or " + std::to_string(n) + " values");
  }
  return vals;
}

}  // namespace

void BuildingParams::validate() const {
  const std::size_t n = n_rooms;
  if (n == 0) throw ConfigError("building needs at least one room");
  auto check_len = [n](const std::vector<double>& v, const char* name) {
    if (v.size() != n) throw ConfigError(std::string(name) + " length != n_rooms");
  };
  check_len(u_out, "u_out");
  check_len(u_ground, "u_ground");
  check_len(heat_capacity, "heat_capacity");
  check_len(p_max, "p_max");
  check_len(solar_gain, "solar_gain");
  check_len(occ_share, "occ_share");
  if (adjacency.size() != n) throw ConfigError("adjacency must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n) throw ConfigError("adjacency must be n x n");
    if (adjacency[i][i] != 0.0) throw ConfigError("adjacency diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency[i][j] < 0.0) throw ConfigError("adjacency must be non-negative");
      if (adjacency[i][j] != adjacency[j][i]) throw ConfigError("adjacency must be symmetric");
    }
  }
  double occ_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u_out[i] < 0.0 || u_ground[i] < 0.0) throw ConfigError("conductances must be >= 0");
    if (heat_capacity[i] <= 0.0) throw ConfigError("heat_capacity must be > 0");
    if (p_max[i] <= 0.0) throw ConfigError("p_max must be > 0");
    if (solar_gain[i] < 0.0) throw ConfigError("solar_gain must be >= 0");
    occ_sum += occ_share[i];
  }
  if (std::abs(occ_sum - 1.0) > 1e-9) throw ConfigError("occ_share must sum to 1");
  // Explicit-Euler stability: the per-room leak over one step must stay < 1.
  for (std::size_t i = 0; i < n; ++i) {
    double conduct = u_out[i] + u_ground[i];
    for (std::size_t j = 0; j < n; ++j) conduct += adjacency[i][j];
    if (kStepSeconds / heat_capacity[i] * conduct >= 1.0) {
      throw ConfigError("unstable building parameters for room " + std::to_string(i + 1));
    }
  }
}

void WeatherParams::validate() const {
  if (daily_amplitude < 0.0) throw ConfigError("daily_amplitude must be >= 0");
  if (ghi_peak < 0.0) throw ConfigError("ghi_peak must be >= 0");
  if (occupant_peak < 0.0) throw ConfigError("occupant_peak must be >= 0");
}

const BuildingParams& Catalog::building(Building b) const {
  for (const auto& [key, params] : buildings) {
    if (key == b) return params;
  }
  throw ConfigError(std::string("no catalog entry for building ") + to_string(b));
}

const WeatherParams& Catalog::weather(Weather w) const {
  for (const auto& [key, params] : weathers) {
    if (key == w) return params;
  }
  throw ConfigError(std::string("no catalog entry for weather ") + to_string(w));
}

const Catalog& Catalog::defaults() {
  static const Catalog cat = build_default_catalog();
  return cat;
}

Catalog Catalog::from_file(const std::string& path) {
  Catalog cat = defaults();
  for (const ConfigSection& sec : parse_config_file(path)) {
    if (sec.name.rfind("building.", 0) == 0) {
      const Building b = building_from_string(sec.name.substr(9));
      BuildingParams base = cat.building(b);
      const auto n = static_cast<std::size_t>(
          config_int(sec, "n_rooms", static_cast<long long>(base.n_rooms)));
      BuildingParams p;
      p.n_rooms = n;
      const double coupling =
          config_double(sec, "adjacency_coupling", base.adjacency.size() > 1 ? base.adjacency[0][1] : 0.0);
      p.adjacency = chain_hub_adjacency(n, coupling);
      auto fb = [&](const std::vector<double>& v) {
        return n == base.n_rooms ? v : std::vector<double>(n, v.empty() ? 0.0 : v[0]);
      };
      p.u_out = per_room(sec, "u_out", n, fb(base.u_out));
      p.u_ground = per_room(sec, "u_ground", n, fb(base.u_ground));
      p.heat_capacity = per_room(sec, "heat_capacity", n, fb(base.heat_capacity));
      p.p_max = per_room(sec, "p_max", n, fb(base.p_max));
      p.solar_gain = per_room(sec, "solar_gain", n, fb(base.solar_gain));
      std::vector<double> occ = config_doubles(sec, "occ_share");
      p.occ_share = occ.empty() ? std::vector<double>(n, 1.0 / static_cast<double>(n))
                                : per_room(sec, "occ_share", n, occ);
      p.validate();
      for (auto& [key, params] : cat.buildings) {
        if (key == b) params = std::move(p);
      }
    } else if (sec.name.rfind("weather.", 0) == 0) {
      const Weather w = weather_from_string(sec.name.substr(8));
      WeatherParams base = cat.weather(w);
      WeatherParams p;
      p.mean_temp = config_double(sec, "mean_temp", base.mean_temp);
      p.daily_amplitude = config_double(sec, "daily_amplitude", base.daily_amplitude);
      p.ghi_peak = config_double(sec, "ghi_peak", base.ghi_peak);
      p.ground_temp = config_double(sec, "ground_temp", base.ground_temp);
      p.occupant_peak = config_double(sec, "occupant_peak", base.occupant_peak);
      p.validate();
      for (auto& [key, params] : cat.weathers) {
        if (key == w) params = p;
      }
    } else {
      throw ConfigError("unknown catalog section: [" + sec.name + "]");
    }
  }
  return cat;
}

Exogenous weather_at(const WeatherParams& w, int step, double sigma,
                     std::uint64_t noise_seed) {
  const int h = ((step % 24) + 24) % 24;
  Exogenous exo;
  exo.outside_temp =
      w.mean_temp + w.daily_amplitude * std::sin(2.0 * kPi * (h - 9) / 24.0);
  if (sigma > 0.0) {
    std::mt19937_64 g(mix_seed(noise_seed, static_cast<std::uint64_t>(step)));
    exo.outside_temp += normal(g, 0.0, sigma);
  }
  exo.ghi = w.ghi_peak * std::max(0.0, std::sin(kPi * (h - 6) / 12.0));
  exo.ground_temp = w.ground_temp;
  exo.occupant_power = (h >= 8 && h <= 18) ? w.occupant_peak : 0.1 * w.occupant_peak;
  return exo;
}

Simulator::Simulator(const ScenarioConfig& cfg, const Catalog& catalog)
    : building_(catalog.building(cfg.building)), weather_(catalog.weather(cfg.weather)) {
  cfg.validate();
  building_.validate();
  weather_.validate();
}

Simulator::Simulator(BuildingParams building, WeatherParams weather)
    : building_(std::move(building)), weather_(std::move(weather)) {
  building_.validate();
  weather_.validate();
}

std::uint64_t Simulator::noise_seed_for(const ScenarioConfig& cfg) {
  return mix_seed(cfg.seed, kNoiseTag);
}

Exogenous Simulator::exogenous_at(int step, const ScenarioConfig& cfg) const {
  return weather_at(weather_, step, cfg.noise_sigma, noise_seed_for(cfg));
}

Episode Simulator::reset(const ScenarioConfig& cfg) const {
  cfg.validate();
  Episode ep;
  ep.cfg = cfg;
  ep.step_index = 0;
  ep.noise_seed = noise_seed_for(cfg);
  std::mt19937_64 g(mix_seed(cfg.seed, kInitTag));
  ep.state.room_temps.resize(building_.n_rooms);
  for (double& t : ep.state.room_temps) {
    t = uniform_range(g, cfg.target_temp - 4.0, cfg.target_temp + 4.0);
  }
  const Exogenous exo = exogenous_at(0, cfg);
  ep.state.outside_temp = exo.outside_temp;
  ep.state.ghi = exo.ghi;
  ep.state.ground_temp = exo.ground_temp;
  ep.state.occupant_power = exo.occupant_power;
  return ep;
}

StepOutcome Simulator::step_state(const StateVector& state, const ActionVector& action,
                                  int step, const ScenarioConfig& cfg) const {
  const std::size_t n = building_.n_rooms;
  if (state.n_rooms() != n) {
    throw DimensionError("state has " + std::to_string(state.n_rooms()) +
                         " rooms, building has " + std::to_string(n));
  }
  if (action.size() != n) {
    throw DimensionError("action has " + std::to_string(action.size()) +
                         " components, building has " + std::to_string(n));
  }

  StateVector next;
  next.room_temps.resize(n);
  std::vector<double> couplings;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = state.room_temps[i];
    couplings.clear();
    for (std::size_t j = 0; j < n; ++j) {
      const double u = building_.adjacency[i][j];
      if (u > 0.0) couplings.push_back(u * (state.room_temps[j] - t));
    }
    // Value-sorted accumulation keeps the sum independent of room labelling.
    std::sort(couplings.begin(), couplings.end());
    double coupling_sum = 0.0;
    for (double c : couplings) coupling_sum += c;

    const double power = building_.u_out[i] * (state.outside_temp - t) +
                         building_.u_ground[i] * (state.ground_temp - t) +
                         action.values[i] * building_.p_max[i] +
                         building_.solar_gain[i] * state.ghi +
                         building_.occ_share[i] * state.occupant_power + coupling_sum;
    next.room_temps[i] = t + kStepSeconds / building_.heat_capacity[i] * power;
  }

  const Exogenous exo = exogenous_at(step + 1, cfg);
  next.outside_temp = exo.outside_temp;
  next.ghi = exo.ghi;
  next.ground_temp = exo.ground_temp;
  next.occupant_power = exo.occupant_power;

  const RewardParts parts = reward(next, action, cfg);
  StepOutcome out;
  out.reward = parts.reward;
  out.energy_term = parts.energy_term;
  out.comfort_term = parts.comfort_term;
  out.next_state = std::move(next);
  return out;
}

StepOutcome Simulator::step(Episode& ep, const ActionVector& action) const {
  if (ep.finished()) throw StateError("episode already finished");
  StepOutcome out = step_state(ep.state, action, ep.step_index, ep.cfg);
  ep.state = out.next_state;
  ep.step_index += 1;
  return out;
}

}  // namespace hvaclab
