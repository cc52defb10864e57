#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hvaclab/core.hpp"
#include "hvaclab/demostore.hpp"
#include "hvaclab/llmclient.hpp"
#include "hvaclab/promptgen.hpp"
#include "hvaclab/simulator.hpp"

// Controllers: random, zero-action, proportional, a CEM-based MPC oracle with
// ground-truth future weather, and the LLM in-context controller closing the
// retrieve -> prompt -> complete -> parse loop.

namespace hvaclab {

struct EpisodeView {
  const StateVector& state;
  int step;
  const ScenarioConfig& cfg;
};

struct Transition {
  StateVector state;  // pre-action
  ActionVector action;
  StepOutcome outcome;
};

class Controller {
 public:
  virtual ~Controller() = default;

  // Must return an in-range action of the episode's room count.
  virtual ActionVector act(const EpisodeView& view) = 0;

  // Called after the returned action was executed.
  virtual void observe(const Transition& transition) { (void)transition; }

  // Parse-failure fallbacks taken so far (LLM controller only).
  virtual std::size_t fallback_count() const { return 0; }

  // Per-step prompt sizes, when the controller issues prompts.
  virtual const std::vector<std::size_t>* prompt_chars() const { return nullptr; }
};

std::unique_ptr<Controller> make_random_controller(std::uint64_t seed);
std::unique_ptr<Controller> make_zero_controller();

// a_i = clamp(gain * (target - t_i), -1, 1). The default gain matches the
// mock model's 25/100 scaling.
std::unique_ptr<Controller> make_proportional_controller(double gain = 0.25);

struct MpcConfig {
  int horizon = 10;
  int population = 64;
  int elites = 8;
  int iterations = 5;
  double init_std = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Receding-horizon cross-entropy planner over the known dynamics, scoring
// candidate action sequences by their summed step rewards under ground-truth
// future weather. Keeps the previous iteration's elites in the population, so
// the elite mean score is non-decreasing across iterations (checked).
std::unique_ptr<Controller> make_mpc_controller(const MpcConfig& cfg, const Simulator& sim);

struct LlmControllerOptions {
  PromptFlags flags{};
  std::size_t max_prompt_chars = 24000;
  int parse_reasks = 2;  // re-sends after a parse failure, before falling back
  std::uint64_t seed = 0;
  // Called with (prompt, response) after each completion, e.g. for transcripts.
  std::function<void(const std::string&, const std::string&)> on_exchange;
};

// `expert` may be null when the demo mix requests no stored demonstrations.
// The buffer is caller-owned and fed by observe().
std::unique_ptr<Controller> make_llm_controller(ChatModel& model,
                                                const LlmControllerOptions& options,
                                                const DemoDataset* expert,
                                                OnlineBuffer& buffer);

// Runs seeded episodes (scenario.seed, scenario.seed + 1, ...) under `expert`
// until n_transitions records are collected.
DemoDataset collect_expert_demos(const ScenarioConfig& scenario, const Simulator& sim,
                                 Controller& expert, std::size_t n_transitions);

}  // namespace hvaclab
