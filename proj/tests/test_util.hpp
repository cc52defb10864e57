#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hvaclab/core.hpp"
#include "hvaclab/demostore.hpp"

// Shared helpers for the test suites.

namespace hvaclab::testutil {

inline std::string golden_path(const std::string& name) {
  return std::string(HVACLAB_GOLDEN_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing golden file: " + path +
                                    " (set HVACLAB_REGEN_GOLDEN=1 to create)");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Byte compare against tests/golden/<name>; HVACLAB_REGEN_GOLDEN=1 rewrites
// the file instead, for intentional template changes.
inline bool golden_match(const std::string& name, const std::string& actual,
                         std::string* expected_out = nullptr) {
  const std::string path = golden_path(name);
  if (std::getenv("HVACLAB_REGEN_GOLDEN")) {
    std::ofstream out(path, std::ios::binary);
    out << actual;
    return true;
  }
  const std::string expected = read_file(path);
  if (expected_out) *expected_out = expected;
  return expected == actual;
}

// Deterministic synthetic demonstration corpus spanning all scenarios.
inline DemoDataset make_fixture_dataset(std::size_t count) {
  const Building buildings[] = {Building::OfficeSmall, Building::OfficeMedium,
                                Building::OfficeLarge};
  const Weather weathers[] = {Weather::ColdDry, Weather::CoolDry, Weather::WarmDry,
                              Weather::MixedDry};
  const std::size_t rooms_of[] = {4, 7, 12};

  DemoDataset ds;
  for (std::size_t i = 0; i < count; ++i) {
    ScenarioConfig cfg;
    cfg.building = buildings[i % 3];
    cfg.weather = weathers[i % 4];
    const std::size_t n = rooms_of[i % 3];

    StateVector state;
    state.room_temps.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      state.room_temps[r] = 16.0 + static_cast<double>((i * 7 + r * 3) % 12);
    }
    state.outside_temp = -5.0 + static_cast<double>(i % 30);
    state.ghi = static_cast<double>((i * 37) % 700);
    state.ground_temp = 5.0 + static_cast<double>(i % 10);
    state.occupant_power = static_cast<double>((i * 53) % 2000);

    ActionVector action;
    action.values.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      action.values[r] = -1.0 + 2.0 * static_cast<double>((i + r) % 21) / 20.0;
    }

    StepOutcome outcome;
    outcome.next_state = state;
    for (std::size_t r = 0; r < n; ++r) {
      outcome.next_state.room_temps[r] += action.values[r];  // toy dynamics
    }
    const RewardParts parts = reward(outcome.next_state, action, cfg);
    outcome.reward = parts.reward;
    outcome.energy_term = parts.energy_term;
    outcome.comfort_term = parts.comfort_term;

    ds.records.push_back(make_demo_record(cfg, state, action, outcome));
  }
  return ds;
}

}  // namespace hvaclab::testutil
