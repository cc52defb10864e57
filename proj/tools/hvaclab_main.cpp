// hvaclab: desk-scale HVAC control laboratory.
//
// Subcommands:
//   collect         gather expert demonstrations into a JSONL dataset
//   run             run episodes of one scenario under one controller
//   sweep           run every experiment in a spec file and emit reports
//   report          re-aggregate an existing results.csv into summary.csv
//   inspect-prompt  print the exact prompt that would be sent for a state

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hvaclab/harness.hpp"
#include "hvaclab/translate.hpp"

namespace {

using namespace hvaclab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitTransport = 4;
constexpr int kExitIo = 5;
constexpr int kExitProtocol = 6;
constexpr int kExitInternal = 70;

struct LlmCliOptions {
  std::string mode = "mock";  // mock | endpoint
  std::string base_url = "http://127.0.0.1:8080/v1";
  std::string model = "gpt-4";
  double temperature = 0.0;
  std::string api_key_env = "HVACLAB_API_KEY";
  long long timeout_ms = 30000;
  int retries = 2;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--llm", mode, "Chat model: mock or endpoint")
        ->check(CLI::IsMember({"mock", "endpoint"}))
        ->capture_default_str();
    cmd->add_option("--base-url", base_url, "Chat-completions base URL")
        ->capture_default_str();
    cmd->add_option("--model", model, "Model name sent to the endpoint")
        ->capture_default_str();
    cmd->add_option("--temperature", temperature, "Sampling temperature")
        ->capture_default_str();
    cmd->add_option("--api-key-env", api_key_env,
                    "Environment variable holding the API key")
        ->capture_default_str();
    cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout")
        ->capture_default_str();
    cmd->add_option("--retries", retries, "Retries on 429/5xx/transport errors")
        ->capture_default_str();
  }

  std::function<std::unique_ptr<ChatModel>(const ScenarioConfig&)> factory() const {
    if (mode == "mock") {
      return [](const ScenarioConfig& cfg) { return std::make_unique<MockChatModel>(cfg); };
    }
    LlmConfig llm;
    llm.base_url = base_url;
    llm.model_name = model;
    llm.temperature = temperature;
    llm.api_key_env = api_key_env;
    llm.timeout = std::chrono::milliseconds(timeout_ms);
    llm.max_retries = retries;
    return [llm](const ScenarioConfig&) { return std::make_unique<HttpChatModel>(llm); };
  }
};

struct FlagCliOptions {
  bool no_description = false;
  bool no_instructions = false;
  bool no_comments = false;
  bool self_comment = false;
  bool no_rounding = false;
  bool random_demos = false;
  std::vector<std::size_t> demo_mix = {2, 2, 4};

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--no-description", no_description, "Drop the building/weather description");
    cmd->add_flag("--no-instructions", no_instructions, "Drop the mode instructions");
    cmd->add_flag("--no-comments", no_comments, "Drop feedback comments from demonstrations");
    cmd->add_flag("--self-comment", self_comment, "Append the self-comment request");
    cmd->add_flag("--no-rounding", no_rounding, "Keep full-precision numbers in the state");
    cmd->add_flag("--random-demos", random_demos, "Sample demonstrations uniformly");
    cmd->add_option("--demo-mix", demo_mix,
                    "Historical/representative/expert demonstration counts")
        ->expected(3);
  }

  PromptFlags to_flags() const {
    PromptFlags f;
    f.include_description = !no_description;
    f.include_instructions = !no_instructions;
    f.manual_comments = !no_comments;
    f.self_comment = self_comment;
    f.rounded = !no_rounding;
    f.random_demos = random_demos;
    f.demo_mix = {demo_mix[0], demo_mix[1], demo_mix[2]};
    return f;
  }
};

Catalog load_catalog(const std::string& path) {
  return path.empty() ? Catalog::defaults() : Catalog::from_file(path);
}

void print_scenario(std::ostream& out, const ScenarioConfig& cfg) {
  out << "building = " << to_string(cfg.building) << "\n"
      << "weather = " << to_string(cfg.weather) << "\n"
      << "alpha = " << cfg.alpha << "\n"
      << "target_temp = " << cfg.target_temp << "\n"
      << "episode_len = " << cfg.episode_len << "\n"
      << "noise_sigma = " << cfg.noise_sigma << "\n";
}

// ---- collect ----

struct CollectArgs {
  std::string building;
  std::string weather;
  std::size_t n = 0;
  std::string out;
  std::string expert = "mpc";
  std::uint64_t seed = 1;
  int episode_len = 240;
  double alpha = 0.5;
  double target_temp = 22.0;
  double gain = 0.25;
  std::string catalog;
};

int cmd_collect(const CollectArgs& args) {
  ScenarioConfig cfg;
  cfg.building = building_from_string(args.building);
  cfg.weather = weather_from_string(args.weather);
  cfg.seed = args.seed;
  cfg.episode_len = args.episode_len;
  cfg.alpha = args.alpha;
  cfg.target_temp = args.target_temp;

  std::cout << "collect: n = " << args.n << ", expert = " << args.expert
            << ", seed = " << args.seed << ", out = " << args.out << "\n";
  print_scenario(std::cout, cfg);

  const Catalog catalog = load_catalog(args.catalog);
  Simulator sim(cfg, catalog);
  std::unique_ptr<Controller> expert;
  if (args.expert == "mpc") {
    MpcConfig mpc;
    mpc.seed = args.seed;
    expert = make_mpc_controller(mpc, sim);
  } else if (args.expert == "proportional") {
    expert = make_proportional_controller(args.gain);
  } else {
    expert = make_random_controller(args.seed);
  }

  const DemoDataset ds = collect_expert_demos(cfg, sim, *expert, args.n);
  save_dataset(ds, args.out);
  std::cout << "wrote " << ds.size() << " records to " << args.out << "\n";
  return kExitOk;
}

// ---- run ----

struct RunArgs {
  std::string building = "OfficeMedium";
  std::string weather = "CoolDry";
  std::string controller = "llm";
  std::string group = "D";
  std::vector<std::uint64_t> seeds = {1};
  int episode_len = 240;
  double alpha = 0.5;
  double target_temp = 22.0;
  double noise_sigma = 0.0;
  double gain = 0.25;
  std::string datasets;
  std::string out_dir;
  std::string catalog;
  int jobs = 1;
  LlmCliOptions llm;
  FlagCliOptions flags;
};

int cmd_run(const RunArgs& args) {
  ExperimentSpec spec;
  spec.id = std::string(args.controller) + "-" + args.building + "-" + args.weather;
  spec.group = group_from_string(args.group);
  spec.target.building = building_from_string(args.building);
  spec.target.weather = weather_from_string(args.weather);
  spec.target.episode_len = args.episode_len;
  spec.target.alpha = args.alpha;
  spec.target.target_temp = args.target_temp;
  spec.target.noise_sigma = args.noise_sigma;
  spec.controller = controller_from_string(args.controller);
  spec.seeds = args.seeds;
  spec.proportional_gain = args.gain;
  spec.flags = args.flags.to_flags();
  if (spec.group == Group::F) spec.flags.demo_mix = {spec.flags.demo_mix.n_hist, 0, 0};

  std::cout << "run: id = " << spec.id << ", controller = " << args.controller
            << ", group = " << to_string(spec.group) << ", seeds =";
  for (std::uint64_t s : spec.seeds) std::cout << " " << s;
  std::cout << "\n";
  print_scenario(std::cout, spec.target);

  const Catalog catalog = load_catalog(args.catalog);
  RunOptions options;
  options.catalog = &catalog;
  options.jobs = args.jobs;
  options.chat_model_factory = args.llm.factory();

  DemoLibrary library(args.datasets.empty() ? DemoLibrary() : DemoLibrary(args.datasets));
  const std::vector<RunResult> results = run_experiment(spec, library, options);

  for (const RunResult& r : results) {
    if (r.failed) {
      std::cout << "seed " << r.seed << ": FAILED (" << r.failure << ")\n";
    } else {
      std::cout << "seed " << r.seed << ": mean step reward " << r.mean_step_reward
                << " (std " << r.std_step_reward << ", fallbacks " << r.fallback_count
                << ")\n";
    }
  }
  const auto summary = summarize(results);
  std::cout << "aggregate: mean " << summary[0].reward_mean << ", std "
            << summary[0].reward_std << " over " << summary[0].n_seeds - summary[0].n_failed
            << " seeds\n";
  if (!args.out_dir.empty()) {
    emit_report(results, args.out_dir);
    std::cout << "report written to " << args.out_dir << "\n";
  }
  return kExitOk;
}

// ---- sweep ----

struct SweepArgs {
  std::string spec_file;
  std::string out_dir;
  std::string datasets;
  std::string catalog;
  std::string cache_file;
  bool dry_run = false;
  bool transcripts = false;
  int jobs = 1;
  LlmCliOptions llm;
};

int cmd_sweep(const SweepArgs& args) {
  const std::vector<ExperimentSpec> specs = parse_experiment_file(args.spec_file);

  std::cout << "sweep: " << specs.size() << " experiments from " << args.spec_file
            << ", llm = " << args.llm.mode << ", jobs = " << args.jobs << "\n";
  for (const ExperimentSpec& spec : specs) {
    std::cout << "  " << spec.id << ": group " << to_string(spec.group) << ", controller "
              << to_string(spec.controller) << ", " << spec.seeds.size() << " seeds, "
              << "mix " << spec.flags.demo_mix.n_hist << "/" << spec.flags.demo_mix.n_repr
              << "/" << spec.flags.demo_mix.n_expert << "\n";
  }
  if (args.dry_run) {
    std::cout << "dry run: nothing written\n";
    return kExitOk;
  }

  const Catalog catalog = load_catalog(args.catalog);
  RunOptions options;
  options.catalog = &catalog;
  options.jobs = args.jobs;
  options.chat_model_factory = args.llm.factory();
  if (args.transcripts) {
    options.transcript_dir = (std::filesystem::path(args.out_dir) / "transcripts").string();
  }
  if (!args.cache_file.empty()) {
    if (args.llm.temperature > 0.0) {
      std::cerr << "note: sampling temperature > 0, response cache disabled\n";
    } else {
      options.response_cache = std::make_shared<ResponseCache>(args.cache_file);
    }
  }

  DemoLibrary library(args.datasets.empty() ? DemoLibrary() : DemoLibrary(args.datasets));
  std::vector<RunResult> all;
  for (const ExperimentSpec& spec : specs) {
    std::cout << "running " << spec.id << " ...\n";
    for (RunResult& r : run_experiment(spec, library, options)) {
      all.push_back(std::move(r));
    }
  }
  emit_report(all, args.out_dir);
  std::cout << "report written to " << args.out_dir << "\n";
  return kExitOk;
}

// ---- report ----

int cmd_report(const std::string& results_csv, const std::string& out_csv) {
  const auto summaries = summarize_results_csv(results_csv);
  write_summary_csv(summaries, out_csv);
  std::cout << "wrote " << summaries.size() << " summary rows to " << out_csv << "\n";
  return kExitOk;
}

// ---- inspect-prompt ----

struct InspectArgs {
  std::string state_file;
  std::string datasets;
  std::uint64_t seed = 1;
  FlagCliOptions flags;
};

int cmd_inspect_prompt(const InspectArgs& args) {
  std::ifstream in(args.state_file);
  if (!in) throw IoError("cannot open state file: " + args.state_file);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("state file is not valid JSON: " + args.state_file);

  ScenarioConfig cfg;
  StateVector state;
  try {
    cfg.building = building_from_string(j.at("building").get<std::string>());
    cfg.weather = weather_from_string(j.at("weather").get<std::string>());
    cfg.target_temp = j.value("target_temp", 22.0);
    cfg.alpha = j.value("alpha", 0.5);
    state.room_temps = j.at("room_temps").get<std::vector<double>>();
    state.outside_temp = j.at("outside_temp").get<double>();
    state.ghi = j.value("ghi", 0.0);
    state.ground_temp = j.value("ground_temp", 0.0);
    state.occupant_power = j.value("occupant_power", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("state file " + args.state_file + ": " + e.what());
  }
  state.validate();

  const PromptFlags flags = args.flags.to_flags();
  std::cerr << "inspect-prompt: building = " << to_string(cfg.building) << ", weather = "
            << to_string(cfg.weather) << ", mix = " << flags.demo_mix.n_hist << "/"
            << flags.demo_mix.n_repr << "/" << flags.demo_mix.n_expert << "\n";

  std::vector<TaggedDemo> demos;
  OnlineBuffer buffer(64);
  if (flags.demo_mix.total() > 0 && !args.datasets.empty()) {
    DemoLibrary library(args.datasets);
    const DemoDataset& pool = library.load_union([](Building, Weather) { return true; });
    const std::string key_text =
        meta_translate(cfg).text + state_translate(state, cfg, true).text;
    if (flags.random_demos) {
      std::mt19937_64 g(args.seed);
      demos = random_demos(pool, std::min(flags.demo_mix.total(), pool.size()), g);
    } else {
      demos = select_demos(embed(key_text), buffer, pool, flags.demo_mix, args.seed);
    }
  }

  const PromptBundle bundle =
      budget_check(build_prompt(state, cfg, demos, flags), 24000);
  std::cout << bundle.full_text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale laboratory for LLM-in-the-loop HVAC control"};
  app.require_subcommand(1);

  CollectArgs collect;
  CLI::App* c = app.add_subcommand("collect", "Collect expert demonstrations");
  c->add_option("--building", collect.building, "OfficeSmall | OfficeMedium | OfficeLarge")
      ->required();
  c->add_option("--weather", collect.weather, "ColdDry | CoolDry | WarmDry | MixedDry")
      ->required();
  c->add_option("--n", collect.n, "Number of transitions")
      ->required()
      ->check(CLI::PositiveNumber);
  c->add_option("--out", collect.out, "Output JSONL path")->required();
  c->add_option("--expert", collect.expert, "Expert policy")
      ->check(CLI::IsMember({"mpc", "proportional", "random"}))
      ->capture_default_str();
  c->add_option("--seed", collect.seed)->capture_default_str();
  c->add_option("--episode-len", collect.episode_len)->capture_default_str();
  c->add_option("--alpha", collect.alpha)->capture_default_str();
  c->add_option("--target-temp", collect.target_temp)->capture_default_str();
  c->add_option("--gain", collect.gain, "Proportional expert gain")->capture_default_str();
  c->add_option("--catalog", collect.catalog, "Catalog override file");

  RunArgs run;
  CLI::App* r = app.add_subcommand("run", "Run one scenario under one controller");
  r->add_option("--building", run.building)->capture_default_str();
  r->add_option("--weather", run.weather)->capture_default_str();
  r->add_option("--controller", run.controller, "llm | mpc | random | zero | proportional")
      ->check(CLI::IsMember({"llm", "mpc", "random", "zero", "proportional"}))
      ->capture_default_str();
  r->add_option("--group", run.group, "Demo-access group for LLM runs (A-F, GPTRandom)")
      ->capture_default_str();
  r->add_option("--seeds", run.seeds, "Episode seeds")->capture_default_str();
  r->add_option("--episode-len", run.episode_len)->capture_default_str();
  r->add_option("--alpha", run.alpha)->capture_default_str();
  r->add_option("--target-temp", run.target_temp)->capture_default_str();
  r->add_option("--noise-sigma", run.noise_sigma)->capture_default_str();
  r->add_option("--gain", run.gain)->capture_default_str();
  r->add_option("--datasets", run.datasets, "Directory of <Building>_<Weather>.jsonl files");
  r->add_option("--out-dir", run.out_dir, "Write results/summary/traces here");
  r->add_option("--catalog", run.catalog, "Catalog override file");
  r->add_option("--jobs", run.jobs, "Parallel seed workers")->capture_default_str();
  run.llm.add_to(r);
  run.flags.add_to(r);

  SweepArgs sweep;
  CLI::App* s = app.add_subcommand("sweep", "Run every experiment in a spec file");
  s->add_option("--spec", sweep.spec_file, "Experiment spec file")->required();
  s->add_option("--out", sweep.out_dir, "Output directory")->required();
  s->add_option("--datasets", sweep.datasets, "Directory of dataset files");
  s->add_option("--catalog", sweep.catalog, "Catalog override file");
  s->add_option("--cache", sweep.cache_file, "Response cache file (endpoint mode)");
  s->add_flag("--dry-run", sweep.dry_run, "Print planned runs, write nothing");
  s->add_flag("--transcripts", sweep.transcripts, "Log every prompt/response pair");
  s->add_option("--jobs", sweep.jobs, "Parallel seed workers")->capture_default_str();
  sweep.llm.add_to(s);

  std::string report_results, report_out = "summary.csv";
  CLI::App* rep = app.add_subcommand("report", "Re-aggregate results.csv");
  rep->add_option("--results", report_results, "results.csv path")->required();
  rep->add_option("--out", report_out, "Summary output path")->capture_default_str();

  InspectArgs inspect;
  CLI::App* i = app.add_subcommand("inspect-prompt", "Print the prompt for a state file");
  i->add_option("--state", inspect.state_file, "JSON state file")->required();
  i->add_option("--datasets", inspect.datasets, "Directory of dataset files");
  i->add_option("--seed", inspect.seed)->capture_default_str();
  inspect.flags.add_to(i);

  try {
    app.parse(argc, argv);
    if (c->parsed()) return cmd_collect(collect);
    if (r->parsed()) return cmd_run(run);
    if (s->parsed()) return cmd_sweep(sweep);
    if (rep->parsed()) return cmd_report(report_results, report_out);
    if (i->parsed()) return cmd_inspect_prompt(inspect);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
