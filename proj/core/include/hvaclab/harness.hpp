#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hvaclab/control.hpp"
#include "hvaclab/core.hpp"
#include "hvaclab/demostore.hpp"
#include "hvaclab/promptgen.hpp"
#include "hvaclab/simulator.hpp"

// Experiment harness: demonstration-access groups, seeded episode runs with a
// bounded worker pool, aggregation across seeds, and CSV reporting.

namespace hvaclab {

enum class Group { A, B, C, D, E, F, GPTRandom, Custom };
enum class ControllerKind { LLM, MPC, Random, Zero, Proportional };

const char* to_string(Group g);
const char* to_string(ControllerKind c);
Group group_from_string(const std::string& s);
ControllerKind controller_from_string(const std::string& s);

// Which (building, weather) scenarios may contribute expert demonstrations,
// relative to the target scenario. A: neither matches the target; B: any
// building, weather differs; C: building differs, any weather; D: everything;
// E: exactly the target; F: nothing. GPTRandom uses D's pool.
ScenarioPredicate group_filter(Group group, const ScenarioConfig& target);

struct ExperimentSpec {
  std::string id;
  Group group = Group::Custom;
  ScenarioConfig target;
  PromptFlags flags;
  ControllerKind controller = ControllerKind::LLM;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  MpcConfig mpc;
  double proportional_gain = 0.25;
  // Custom group only: explicit demo pool.
  std::vector<Building> demo_buildings;
  std::vector<Weather> demo_weathers;

  ScenarioPredicate demo_filter() const;
  void validate() const;
};

// Copy with outside-temperature noise of the given sigma.
ExperimentSpec perturbed_spec(const ExperimentSpec& spec, double sigma);

struct PromptCharStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

struct RunResult {
  std::string spec_id;
  std::uint64_t seed = 0;
  double mean_step_reward = 0.0;
  double std_step_reward = 0.0;  // sample std over the steps of this episode
  std::size_t fallback_count = 0;
  PromptCharStats prompt_chars;
  std::vector<StateVector> states;  // pre-action state per step
  std::vector<ActionVector> actions;
  std::vector<double> rewards;
  bool failed = false;
  std::string failure;
};

// Lazily loads per-scenario dataset files named <Building>_<Weather>.jsonl
// from a directory, recording every file it actually opened.
class DemoLibrary {
 public:
  DemoLibrary() = default;  // empty library (no datasets on disk)
  explicit DemoLibrary(std::string directory);

  // Union of the records from every catalog scenario accepted by `keep`.
  // Missing files for accepted scenarios raise ConfigError.
  const DemoDataset& load_union(const ScenarioPredicate& keep);

  const std::vector<std::string>& accessed_files() const { return accessed_; }
  static std::string dataset_filename(Building b, Weather w);

 private:
  std::string directory_;
  std::map<std::string, DemoDataset> unions_;
  std::vector<std::string> accessed_;
};

// File-backed map from prompt hash to raw response; lets paid-endpoint
// sweeps resume and re-aggregate for free. Callers should not install one
// when sampling with temperature > 0.
class ResponseCache {
 public:
  explicit ResponseCache(std::string path);
  std::optional<std::string> get(const std::string& prompt);
  void put(const std::string& prompt, const std::string& response);

 private:
  std::string path_;
  std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

struct RunOptions {
  // Builds the chat model for LLM runs; defaults to the deterministic mock.
  std::function<std::unique_ptr<ChatModel>(const ScenarioConfig&)> chat_model_factory;
  int jobs = 1;
  std::size_t max_prompt_chars = 24000;
  // When set, prompt/response pairs are appended to per-run transcript files
  // under this directory.
  std::optional<std::string> transcript_dir;
  std::shared_ptr<ResponseCache> response_cache;
  // Building/weather catalog override; defaults to the compiled-in catalog.
  const Catalog* catalog = nullptr;
};

std::vector<RunResult> run_experiment(const ExperimentSpec& spec, DemoLibrary& library,
                                      const RunOptions& options = {});

struct SpecSummary {
  std::string spec_id;
  std::size_t n_seeds = 0;
  std::size_t n_failed = 0;
  double reward_mean = 0.0;  // mean over per-seed mean_step_reward
  double reward_std = 0.0;   // sample std over per-seed mean_step_reward
};

std::vector<SpecSummary> summarize(const std::vector<RunResult>& results);

// Writes results.csv, summary.csv and traces/<spec>_seed<seed>.csv.
void emit_report(const std::vector<RunResult>& results, const std::string& out_dir);

// Re-aggregates a previously written results.csv into SpecSummary rows.
std::vector<SpecSummary> summarize_results_csv(const std::string& results_csv);
void write_summary_csv(const std::vector<SpecSummary>& summaries, const std::string& path);

// Experiment spec files: an INI-style file with one [experiment <id>] section
// per spec and an optional [defaults] section (see README for the schema).
std::vector<ExperimentSpec> parse_experiment_file(const std::string& path);
std::vector<ExperimentSpec> parse_experiment_text(const std::string& text,
                                                  const std::string& origin = "<text>");

}  // namespace hvaclab
