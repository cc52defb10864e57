#include "hvaclab/translate.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hvaclab/rng.hpp"
#include "test_util.hpp"

using namespace hvaclab;
using hvaclab::testutil::golden_match;

namespace {

ScenarioConfig cfg_for(Building b, Weather w) {
  ScenarioConfig cfg;
  cfg.building = b;
  cfg.weather = w;
  return cfg;
}

StateVector four_room_state() {
  StateVector s;
  s.room_temps = {21.0, 20.0, 23.0, 19.0};
  s.outside_temp = 8.0;
  s.ghi = 0.0;
  s.ground_temp = 5.6;
  s.occupant_power = 200.0;
  return s;
}

}  // namespace

TEST(RoundInt, NearestAndTies) {
  EXPECT_EQ(round_int(21.6), 22);
  EXPECT_EQ(round_int(-0.5), -1);  // ties away from zero
  EXPECT_EQ(round_int(0.5), 1);
  EXPECT_EQ(round_int(22.0), 22);
  EXPECT_EQ(round_int(-21.5), -22);
  EXPECT_THROW(round_int(std::nan("")), ValueError);
}

TEST(Meta, MediumCoolDry) {
  const TextFragment f = meta_translate(cfg_for(Building::OfficeMedium, Weather::CoolDry));
  EXPECT_EQ(f.text,
            "You are controlling the HVAC of a medium office building in a cool and dry "
            "climate.\n");
}

TEST(Meta, SubstitutionAndDeterminism) {
  const ScenarioConfig cfg = cfg_for(Building::OfficeSmall, Weather::ColdDry);
  const TextFragment a = meta_translate(cfg);
  EXPECT_EQ(a.text,
            "You are controlling the HVAC of a small office building in a cold and dry "
            "climate.\n");
  EXPECT_EQ(meta_translate(cfg).text, a.text);
}

TEST(Instruction, ModeSwitchIsStrict) {
  ScenarioConfig cfg = cfg_for(Building::OfficeMedium, Weather::CoolDry);
  StateVector s = four_room_state();

  s.outside_temp = 5.0;
  EXPECT_NE(instruction_translate(s, cfg).text.find("heating mode"), std::string::npos);

  s.outside_temp = 30.0;
  EXPECT_NE(instruction_translate(s, cfg).text.find("cooling mode"), std::string::npos);

  s.outside_temp = 22.0;  // boundary: not lower than target
  EXPECT_NE(instruction_translate(s, cfg).text.find("cooling mode"), std::string::npos);
}

TEST(Instruction, ExactlyTwoNumberedItems) {
  const TextFragment f = instruction_translate(
      four_room_state(), cfg_for(Building::OfficeMedium, Weather::CoolDry));
  EXPECT_NE(f.text.find("\n1. "), std::string::npos);
  EXPECT_NE(f.text.find("\n2. "), std::string::npos);
  EXPECT_EQ(f.text.find("\n3. "), std::string::npos);
}

TEST(State, RoomLinesThenExogenousThenTarget) {
  const TextFragment f = state_translate(
      four_room_state(), cfg_for(Building::OfficeSmall, Weather::CoolDry), true);
  EXPECT_NE(f.text.find("Room 1 temperature: 21 degrees Celsius.\n"), std::string::npos);
  EXPECT_NE(f.text.find("Room 2 temperature: 20 degrees Celsius.\n"), std::string::npos);
  EXPECT_NE(f.text.find("Room 3 temperature: 23 degrees Celsius.\n"), std::string::npos);
  EXPECT_NE(f.text.find("Room 4 temperature: 19 degrees Celsius.\n"), std::string::npos);
  EXPECT_NE(f.text.find("The target temperature is 22 degrees Celsius.\n"),
            std::string::npos);
}

TEST(State, LineCountIsRoomsPlusFive) {
  std::mt19937_64 g(3);
  for (std::size_t n : {1u, 2u, 4u, 7u, 12u}) {
    StateVector s;
    s.room_temps.resize(n);
    for (double& t : s.room_temps) t = uniform_range(g, 10.0, 30.0);
    s.outside_temp = 8.0;
    s.ground_temp = 5.0;
    const std::string text =
        state_translate(s, cfg_for(Building::OfficeSmall, Weather::CoolDry), true).text;
    const std::size_t lines =
        static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    EXPECT_EQ(lines, n + 5);
  }
}

TEST(State, UnroundedPassesThrough) {
  StateVector s = four_room_state();
  s.room_temps = {21.4};
  const TextFragment f =
      state_translate(s, cfg_for(Building::OfficeSmall, Weather::CoolDry), false);
  EXPECT_NE(f.text.find("21.4"), std::string::npos);
}

TEST(Action, PaperScaling) {
  const TextFragment f = action_translate(ActionVector{{0.95, 0.9, 0.72, 0.68}});
  EXPECT_EQ(f.text, "Action: [95, 90, 72, 68]\n");
}

TEST(Action, ZerosAndEndpoints) {
  EXPECT_EQ(action_translate(ActionVector{{0.0, 0.0}}).text, "Action: [0, 0]\n");
  EXPECT_EQ(action_translate(ActionVector{{-1.0, 1.0}}).text, "Action: [-100, 100]\n");
}

TEST(ActionUntranslate, InverseOfPaperExample) {
  const ActionVector a = action_untranslate({95, 90, 72, 68}, 4);
  EXPECT_EQ(a.values, (std::vector<double>{0.95, 0.9, 0.72, 0.68}));
}

TEST(ActionUntranslate, ClampsAndCounts) {
  std::size_t clamped = 0;
  const ActionVector a = action_untranslate({150}, 1, &clamped);
  EXPECT_DOUBLE_EQ(a.values[0], 1.0);
  EXPECT_EQ(clamped, 1u);
  EXPECT_THROW(action_untranslate({1, 2}, 3), DimensionError);
}

TEST(ActionUntranslate, RoundTripWithinQuantum) {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform_index(g, 6));
    ActionVector a;
    a.values.resize(n);
    for (double& v : a.values) v = uniform_range(g, -1.0, 1.0);

    // Rendered integers -> actions: each component within half a quantum.
    std::vector<long long> ints;
    for (double v : a.values) ints.push_back(round_int(100.0 * v));
    const ActionVector back = action_untranslate(ints, n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(std::abs(back.values[i] - a.values[i]), 0.005);
    }

    // Integer grids survive exactly.
    const ActionVector grid = action_untranslate(ints, n);
    std::vector<long long> ints2;
    for (double v : grid.values) ints2.push_back(round_int(100.0 * v));
    EXPECT_EQ(ints, ints2);
  }
}

TEST(Feedback, RewardTimesTenRounded) {
  StepOutcome outcome;
  outcome.reward = 1.16;
  outcome.next_state.room_temps = {22.0};
  const TextFragment f =
      feedback_translate(outcome, cfg_for(Building::OfficeMedium, Weather::CoolDry));
  EXPECT_NE(f.text.find("reward of this action is 12."), std::string::npos);
}

TEST(Feedback, AboveBelowAtComments) {
  ScenarioConfig cfg = cfg_for(Building::OfficeMedium, Weather::CoolDry);
  StepOutcome outcome;
  outcome.reward = 1.0;

  outcome.next_state.room_temps = {22.0, 22.0};
  std::string text = feedback_translate(outcome, cfg).text;
  EXPECT_EQ(std::string::npos, text.find("above"));
  EXPECT_EQ(std::string::npos, text.find("below"));
  EXPECT_NE(std::string::npos, text.find("Room 1 temperature is now 22 degrees Celsius, "
                                         "at the target temperature.\n"));

  outcome.next_state.room_temps = {25.0, 19.0};
  text = feedback_translate(outcome, cfg).text;
  const auto above = text.find("above the target");
  const auto below = text.find("below the target");
  ASSERT_NE(above, std::string::npos);
  ASSERT_NE(below, std::string::npos);
  EXPECT_LT(above, below);
}

// Frozen reference bytes for all five translators on a fixed input.
TEST(Golden, AllTranslators) {
  const ScenarioConfig cfg = cfg_for(Building::OfficeMedium, Weather::CoolDry);
  const StateVector s = four_room_state();

  StepOutcome outcome;
  outcome.reward = 1.16;
  outcome.next_state = s;
  outcome.next_state.room_temps = {25.0, 19.0, 22.0, 21.6};

  std::string all;
  all += meta_translate(cfg).text;
  all += instruction_translate(s, cfg).text;
  all += state_translate(s, cfg, true).text;
  all += state_translate(s, cfg, false).text;
  all += action_translate(ActionVector{{0.95, 0.9, 0.72, 0.68}}).text;
  all += feedback_translate(outcome, cfg).text;

  std::string expected;
  EXPECT_TRUE(golden_match("translators.txt", all, &expected))
      << "translator output diverged from tests/golden/translators.txt";
}
