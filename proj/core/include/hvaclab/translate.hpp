#pragma once

#include <string>
#include <vector>

#include "hvaclab/core.hpp"

// Natural-language renderings of states, actions and outcomes. All templates
// are frozen; tests/golden holds the reference bytes and docs/prompt-format.md
// documents the wording. Every fragment ends with a final newline.

namespace hvaclab {

enum class FragmentKind { Meta, Instruction, State, Action, Feedback };

struct TextFragment {
  FragmentKind kind;
  std::string text;
};

// Nearest integer, ties away from zero. Throws ValueError on non-finite x.
long long round_int(double x);

// "21" when rounded, "%.6g" otherwise (so 21.4 stays "21.4").
std::string format_number(double x, bool rounded);

// One sentence naming building size and climate.
TextFragment meta_translate(const ScenarioConfig& cfg);

// Heating-mode rules when outside_temp < target (strictly), else cooling-mode.
// Exactly two numbered rule items.
TextFragment instruction_translate(const StateVector& state, const ScenarioConfig& cfg);

// One line per room, four exogenous lines, one target line: n + 5 lines.
TextFragment state_translate(const StateVector& state, const ScenarioConfig& cfg,
                             bool rounded);

// Each component rendered as round_int(100 * a_i), bracketed.
TextFragment action_translate(const ActionVector& action);

// a_i = int_i / 100; out-of-range inputs clamp (counted via clamped if given).
ActionVector action_untranslate(const std::vector<long long>& ints, std::size_t n,
                                std::size_t* clamped = nullptr);

// First line: reward scaled by 10 and rounded. Then one line per room with an
// above/below/at comparison against the target, on rounded values.
TextFragment feedback_translate(const StepOutcome& outcome, const ScenarioConfig& cfg);

}  // namespace hvaclab
