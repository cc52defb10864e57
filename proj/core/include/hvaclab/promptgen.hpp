#pragma once

#include <span>
#include <string>
#include <vector>

#include "hvaclab/core.hpp"
#include "hvaclab/demostore.hpp"

// Prompt assembly. Section order is fixed: meta description, instructions,
// demonstrations (historical, representative, expert), current state, action
// query, self-comment request. full_text is the plain concatenation of the
// section texts; docs/prompt-format.md documents the wording.

namespace hvaclab {

struct PromptFlags {
  bool include_description = true;
  bool include_instructions = true;
  bool manual_comments = true;   // include feedback_text in each demonstration
  bool self_comment = false;     // append the self-comment request at the end
  bool rounded = true;           // round numbers in the current-state section
  DemoMix demo_mix{};
  bool random_demos = false;     // sample demos uniformly instead of H/R/E
};

enum class SectionLabel { Meta, Instructions, Demonstration, CurrentState, Query, SelfComment };

struct PromptSection {
  SectionLabel label;
  DemoKind demo_kind = DemoKind::Historical;  // meaningful for Demonstration only
  std::string text;
};

struct TrimReport {
  std::size_t dropped_hist = 0;
  std::size_t dropped_repr = 0;
  std::size_t dropped_expert = 0;

  std::size_t total() const { return dropped_hist + dropped_repr + dropped_expert; }
};

struct PromptBundle {
  std::vector<PromptSection> sections;
  std::string full_text;  // concatenation of section texts in order
  std::size_t char_len = 0;
  TrimReport trimmed;
};

PromptBundle build_prompt(const StateVector& state, const ScenarioConfig& cfg,
                          std::span<const TaggedDemo> demos, const PromptFlags& flags);

// Drops demonstrations (expert and random newest-first, then representative,
// then oldest historical) until char_len <= max_chars. The current state and
// query are never dropped; a prompt that cannot fit is a BudgetError.
PromptBundle budget_check(const PromptBundle& bundle, std::size_t max_chars);

}  // namespace hvaclab
