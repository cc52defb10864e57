#include "hvaclab/translate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hvaclab {

namespace {

const char* building_adjective(Building b) {
  switch (b) {
    case Building::OfficeSmall: return "small";
    case Building::OfficeMedium: return "medium";
    case Building::OfficeLarge: return "large";
  }
  return "?";
}

const char* weather_adjective(Weather w) {
  switch (w) {
    case Weather::ColdDry: return "cold and dry";
    case Weather::CoolDry: return "cool and dry";
    case Weather::WarmDry: return "warm and dry";
    case Weather::MixedDry: return "mixed and dry";
  }
  return "?";
}

}  // namespace

long long round_int(double x) {
  if (!std::isfinite(x)) throw ValueError("round_int: non-finite input");
  return std::llround(x);  // llround ties away from zero
}

std::string format_number(double x, bool rounded) {
  if (rounded) return std::to_string(round_int(x));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

TextFragment meta_translate(const ScenarioConfig& cfg) {
  std::string text = "You are controlling the HVAC of a ";
  text += building_adjective(cfg.building);
  text += " office building in a ";
  text += weather_adjective(cfg.weather);
  text += " climate.\n";
  return {FragmentKind::Meta, std::move(text)};
}

TextFragment instruction_translate(const StateVector& state, const ScenarioConfig& cfg) {
  const bool heating = state.outside_temp < cfg.target_temp;  // strict
  std::string text = "Instructions:\n";
  if (heating) {
    text +=
        "1. The outside temperature is lower than the target temperature, so the "
        "HVAC is in heating mode: use positive action values to heat the rooms.\n";
  } else {
    text +=
        "1. The outside temperature is not lower than the target temperature, so the "
        "HVAC is in cooling mode: use negative action values to cool the rooms.\n";
  }
  text +=
      "2. Larger absolute action values consume more energy: use the smallest "
      "values that keep every room near the target temperature.\n";
  return {FragmentKind::Instruction, std::move(text)};
}

TextFragment state_translate(const StateVector& state, const ScenarioConfig& cfg,
                             bool rounded) {
  std::ostringstream out;
  for (std::size_t i = 0; i < state.n_rooms(); ++i) {
    out << "Room " << (i + 1) << " temperature: "
        << format_number(state.room_temps[i], rounded) << " degrees Celsius.\n";
  }
  out << "Outside temperature: " << format_number(state.outside_temp, rounded)
      << " degrees Celsius.\n";
  out << "Global horizontal irradiance: " << format_number(state.ghi, rounded)
      << " W/m2.\n";
  out << "Ground temperature: " << format_number(state.ground_temp, rounded)
      << " degrees Celsius.\n";
  out << "Occupant power: " << format_number(state.occupant_power, rounded) << " W.\n";
  out << "The target temperature is " << format_number(cfg.target_temp, rounded)
      << " degrees Celsius.\n";
  return {FragmentKind::State, out.str()};
}

TextFragment action_translate(const ActionVector& action) {
  std::ostringstream out;
  out << "Action: [";
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (i) out << ", ";
    out << round_int(100.0 * action.values[i]);
  }
  out << "]\n";
  return {FragmentKind::Action, out.str()};
}

ActionVector action_untranslate(const std::vector<long long>& ints, std::size_t n,
                                std::size_t* clamped) {
  if (ints.size() != n) {
    throw DimensionError("action_untranslate: got " + std::to_string(ints.size()) +
                         " integers, expected " + std::to_string(n));
  }
  ActionVector out;
  out.values.reserve(n);
  std::size_t clips = 0;
  for (long long v : ints) {
    if (v < -100 || v > 100) {
      ++clips;
      v = v < -100 ? -100 : 100;
    }
    out.values.push_back(static_cast<double>(v) / 100.0);
  }
  if (clamped) *clamped = clips;
  return out;
}

TextFragment feedback_translate(const StepOutcome& outcome, const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "Feedback: the reward of this action is " << round_int(10.0 * outcome.reward)
      << ".\n";
  const long long target = round_int(cfg.target_temp);
  const auto& temps = outcome.next_state.room_temps;
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const long long t = round_int(temps[i]);
    out << "Room " << (i + 1) << " temperature is now " << t << " degrees Celsius, ";
    if (t > target) {
      out << "above the target temperature.\n";
    } else if (t < target) {
      out << "below the target temperature.\n";
    } else {
      out << "at the target temperature.\n";
    }
  }
  return {FragmentKind::Feedback, out.str()};
}

}  // namespace hvaclab
