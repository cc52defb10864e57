#include "hvaclab/promptgen.hpp"

#include <algorithm>
#include <sstream>

#include "hvaclab/translate.hpp"

namespace hvaclab {

namespace {

void finalize(PromptBundle& bundle) {
  bundle.full_text.clear();
  for (const PromptSection& s : bundle.sections) bundle.full_text += s.text;
  bundle.char_len = bundle.full_text.size();
}

std::string demo_section_text(const TaggedDemo& demo, bool manual_comments) {
  std::string text = "Demonstration:\n";
  text += demo.record.state_text;
  text += demo.record.action_text;
  if (manual_comments) text += demo.record.feedback_text;
  text += "\n";
  return text;
}

std::string query_text(std::size_t n) {
  std::ostringstream out;
  out << "Now give the next action as a bracketed list of " << n
      << (n == 1 ? " integer" : " integers") << " between -100 and 100, one per room, "
      << "for example [10, -20]. Reply with the list only.\n";
  return out.str();
}

const char* kSelfCommentText =
    "Before giving the actions, write one sentence judging whether the demonstrations "
    "above achieved good or bad outcomes, then give the actions.\n";

}  // namespace

PromptBundle build_prompt(const StateVector& state, const ScenarioConfig& cfg,
                          std::span<const TaggedDemo> demos, const PromptFlags& flags) {
  PromptBundle bundle;
  if (flags.include_description) {
    bundle.sections.push_back(
        {SectionLabel::Meta, DemoKind::Historical, meta_translate(cfg).text + "\n"});
  }
  if (flags.include_instructions) {
    bundle.sections.push_back({SectionLabel::Instructions, DemoKind::Historical,
                               instruction_translate(state, cfg).text + "\n"});
  }
  for (const TaggedDemo& demo : demos) {
    bundle.sections.push_back(
        {SectionLabel::Demonstration, demo.kind, demo_section_text(demo, flags.manual_comments)});
  }
  bundle.sections.push_back(
      {SectionLabel::CurrentState, DemoKind::Historical,
       "Current state:\n" + state_translate(state, cfg, flags.rounded).text + "\n"});
  bundle.sections.push_back(
      {SectionLabel::Query, DemoKind::Historical, query_text(state.n_rooms())});
  if (flags.self_comment) {
    bundle.sections.push_back({SectionLabel::SelfComment, DemoKind::Historical, kSelfCommentText});
  }
  finalize(bundle);
  return bundle;
}

PromptBundle budget_check(const PromptBundle& bundle, std::size_t max_chars) {
  if (max_chars == 0) throw ConfigError("max_chars must be > 0");
  PromptBundle out = bundle;
  if (out.char_len <= max_chars) return out;

  auto drop_one = [&out](DemoKind kind, bool newest_first) {
    const auto match = [&](const PromptSection& s) {
      return s.label == SectionLabel::Demonstration && s.demo_kind == kind;
    };
    if (newest_first) {
      for (auto it = out.sections.rbegin(); it != out.sections.rend(); ++it) {
        if (match(*it)) {
          out.sections.erase(std::next(it).base());
          return true;
        }
      }
    } else {
      for (auto it = out.sections.begin(); it != out.sections.end(); ++it) {
        if (match(*it)) {
          out.sections.erase(it);
          return true;
        }
      }
    }
    return false;
  };

  while (out.char_len > max_chars) {
    if (drop_one(DemoKind::Expert, true) || drop_one(DemoKind::Random, true)) {
      ++out.trimmed.dropped_expert;
    } else if (drop_one(DemoKind::Representative, true)) {
      ++out.trimmed.dropped_repr;
    } else if (drop_one(DemoKind::Historical, false)) {
      ++out.trimmed.dropped_hist;
    } else {
      throw BudgetError("prompt of " + std::to_string(out.char_len) +
                        " chars exceeds budget of " + std::to_string(max_chars) +
                        " with no demonstrations left to drop");
    }
    finalize(out);
  }
  return out;
}

}  // namespace hvaclab
