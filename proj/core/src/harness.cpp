#include "hvaclab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hvaclab/config_file.hpp"

namespace hvaclab {

namespace {

constexpr Building kAllBuildings[] = {Building::OfficeSmall, Building::OfficeMedium,
                                      Building::OfficeLarge};
constexpr Weather kAllWeathers[] = {Weather::ColdDry, Weather::CoolDry, Weather::WarmDry,
                                    Weather::MixedDry};

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::uint64_t fnv1a_text(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const char* to_string(Group g) {
  switch (g) {
    case Group::A: return "A";
    case Group::B: return "B";
    case Group::C: return "C";
    case Group::D: return "D";
    case Group::E: return "E";
    case Group::F: return "F";
    case Group::GPTRandom: return "GPTRandom";
    case Group::Custom: return "Custom";
  }
  return "?";
}

const char* to_string(ControllerKind c) {
  switch (c) {
    case ControllerKind::LLM: return "llm";
    case ControllerKind::MPC: return "mpc";
    case ControllerKind::Random: return "random";
    case ControllerKind::Zero: return "zero";
    case ControllerKind::Proportional: return "proportional";
  }
  return "?";
}

Group group_from_string(const std::string& s) {
  if (s == "A") return Group::A;
  if (s == "B") return Group::B;
  if (s == "C") return Group::C;
  if (s == "D") return Group::D;
  if (s == "E") return Group::E;
  if (s == "F") return Group::F;
  if (s == "GPTRandom" || s == "gptrandom" || s == "gpt-random") return Group::GPTRandom;
  if (s == "Custom" || s == "custom") return Group::Custom;
  throw ConfigError("unknown value for 'group': " + s);
}

ControllerKind controller_from_string(const std::string& s) {
  if (s == "llm") return ControllerKind::LLM;
  if (s == "mpc") return ControllerKind::MPC;
  if (s == "random") return ControllerKind::Random;
  if (s == "zero") return ControllerKind::Zero;
  if (s == "proportional") return ControllerKind::Proportional;
  throw ConfigError("unknown value for 'controller': " + s);
}

ScenarioPredicate group_filter(Group group, const ScenarioConfig& target) {
  const Building tb = target.building;
  const Weather tw = target.weather;
  switch (group) {
    case Group::A:
      return [tb, tw](Building b, Weather w) { return b != tb && w != tw; };
    case Group::B:
      return [tw](Building, Weather w) { return w != tw; };
    case Group::C:
      return [tb](Building b, Weather) { return b != tb; };
    case Group::D:
    case Group::GPTRandom:
      return [](Building, Weather) { return true; };
    case Group::E:
      return [tb, tw](Building b, Weather w) { return b == tb && w == tw; };
    case Group::F:
      return [](Building, Weather) { return false; };
    case Group::Custom:
      throw ConfigError("Custom group needs an explicit demo pool");
  }
  throw ConfigError("unknown group");
}

ScenarioPredicate ExperimentSpec::demo_filter() const {
  if (group != Group::Custom) return group_filter(group, target);
  auto buildings = demo_buildings;
  auto weathers = demo_weathers;
  return [buildings, weathers](Building b, Weather w) {
    return std::find(buildings.begin(), buildings.end(), b) != buildings.end() &&
           std::find(weathers.begin(), weathers.end(), w) != weathers.end();
  };
}

void ExperimentSpec::validate() const {
  if (id.empty()) throw ConfigError("experiment id must not be empty");
  target.validate();
  if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
  mpc.validate();
  if (proportional_gain <= 0.0) throw ConfigError("proportional_gain must be > 0");
  if (group == Group::F &&
      (flags.demo_mix.n_repr > 0 || flags.demo_mix.n_expert > 0 || flags.random_demos)) {
    throw ConfigError("group F uses historical demonstrations only");
  }
  if (group == Group::GPTRandom && !flags.random_demos) {
    throw ConfigError("group GPTRandom requires random_demos = true");
  }
}

ExperimentSpec perturbed_spec(const ExperimentSpec& spec, double sigma) {
  if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
  ExperimentSpec out = spec;
  out.target.noise_sigma = sigma;
  return out;
}

std::string DemoLibrary::dataset_filename(Building b, Weather w) {
  return std::string(to_string(b)) + "_" + to_string(w) + ".jsonl";
}

DemoLibrary::DemoLibrary(std::string directory) : directory_(std::move(directory)) {}

const DemoDataset& DemoLibrary::load_union(const ScenarioPredicate& keep) {
  std::string key;
  std::vector<std::pair<Building, Weather>> accepted;
  for (Building b : kAllBuildings) {
    for (Weather w : kAllWeathers) {
      if (keep(b, w)) {
        accepted.emplace_back(b, w);
        key += dataset_filename(b, w);
        key += ";";
      }
    }
  }
  auto it = unions_.find(key);
  if (it != unions_.end()) return it->second;

  DemoDataset merged;
  for (const auto& [b, w] : accepted) {
    if (directory_.empty()) {
      throw ConfigError("experiment needs expert datasets but no dataset directory is set");
    }
    const std::string path =
        (std::filesystem::path(directory_) / dataset_filename(b, w)).string();
    if (!std::filesystem::exists(path)) {
      throw ConfigError("missing dataset file: " + path);
    }
    accessed_.push_back(path);
    DemoDataset ds = load_dataset(path);
    for (DemoRecord& r : ds.records) merged.records.push_back(std::move(r));
  }
  return unions_.emplace(std::move(key), std::move(merged)).first->second;
}

namespace {

// Cache of raw responses keyed by a prompt hash; lets endpoint sweeps resume.
class CachingChatModel final : public ChatModel {
 public:
  CachingChatModel(std::unique_ptr<ChatModel> inner, std::shared_ptr<ResponseCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  LlmResponse complete(const PromptBundle& prompt) override {
    if (auto hit = cache_->get(prompt.full_text)) {
      LlmResponse out;
      out.raw_text = *hit;
      return out;
    }
    LlmResponse out = inner_->complete(prompt);
    cache_->put(prompt.full_text, out.raw_text);
    return out;
  }

 private:
  std::unique_ptr<ChatModel> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

RunResult run_one(const ExperimentSpec& spec, std::uint64_t seed, const Simulator& sim,
                  const DemoDataset* expert, const RunOptions& options) {
  RunResult result;
  result.spec_id = spec.id;
  result.seed = seed;

  ScenarioConfig cfg = spec.target;
  cfg.seed = seed;

  std::unique_ptr<ChatModel> model;
  OnlineBuffer buffer(64);
  std::unique_ptr<Controller> controller;
  std::ofstream transcript;

  switch (spec.controller) {
    case ControllerKind::LLM: {
      if (options.chat_model_factory) {
        model = options.chat_model_factory(cfg);
      } else {
        model = std::make_unique<MockChatModel>(cfg);
      }
      if (options.response_cache) {
        model = std::make_unique<CachingChatModel>(std::move(model), options.response_cache);
      }
      LlmControllerOptions llm_options;
      llm_options.flags = spec.flags;
      llm_options.max_prompt_chars = options.max_prompt_chars;
      llm_options.seed = seed;
      if (options.transcript_dir) {
        std::filesystem::create_directories(*options.transcript_dir);
        const std::string path = (std::filesystem::path(*options.transcript_dir) /
                                  (spec.id + "_seed" + std::to_string(seed) + ".log"))
                                     .string();
        transcript.open(path);
        if (!transcript) throw IoError("cannot open transcript file: " + path);
        llm_options.on_exchange = [&transcript](const std::string& prompt,
                                                const std::string& response) {
          transcript << "=== prompt ===\n" << prompt << "=== response ===\n"
                     << response << "\n\n";
        };
      }
      controller = make_llm_controller(*model, llm_options, expert, buffer);
      break;
    }
    case ControllerKind::MPC: {
      MpcConfig mpc = spec.mpc;
      mpc.seed = seed;
      controller = make_mpc_controller(mpc, sim);
      break;
    }
    case ControllerKind::Random:
      controller = make_random_controller(seed);
      break;
    case ControllerKind::Zero:
      controller = make_zero_controller();
      break;
    case ControllerKind::Proportional:
      controller = make_proportional_controller(spec.proportional_gain);
      break;
  }

  Episode ep = sim.reset(cfg);
  result.states.reserve(static_cast<std::size_t>(cfg.episode_len));
  result.actions.reserve(static_cast<std::size_t>(cfg.episode_len));
  result.rewards.reserve(static_cast<std::size_t>(cfg.episode_len));

  while (!ep.finished()) {
    const StateVector before = ep.state;
    const ActionVector action = validate_action(
        controller->act({ep.state, ep.step_index, cfg}).values, sim.n_rooms());
    const StepOutcome outcome = sim.step(ep, action);
    controller->observe({before, action, outcome});
    result.states.push_back(before);
    result.actions.push_back(action);
    result.rewards.push_back(outcome.reward);
  }

  result.mean_step_reward = mean_of(result.rewards);
  result.std_step_reward = sample_std(result.rewards);
  result.fallback_count = controller->fallback_count();
  if (const std::vector<std::size_t>* chars = controller->prompt_chars();
      chars && !chars->empty()) {
    result.prompt_chars.min = *std::min_element(chars->begin(), chars->end());
    result.prompt_chars.max = *std::max_element(chars->begin(), chars->end());
    double sum = 0.0;
    for (std::size_t c : *chars) sum += static_cast<double>(c);
    result.prompt_chars.mean = sum / static_cast<double>(chars->size());
  }
  return result;
}

}  // namespace

std::vector<RunResult> run_experiment(const ExperimentSpec& spec, DemoLibrary& library,
                                      const RunOptions& options) {
  spec.validate();
  Simulator sim(spec.target, options.catalog ? *options.catalog : Catalog::defaults());

  const DemoDataset* expert = nullptr;
  const DemoMix& mix = spec.flags.demo_mix;
  const bool needs_expert = spec.controller == ControllerKind::LLM &&
                            (spec.flags.random_demos ? mix.total() > 0
                                                     : (mix.n_repr > 0 || mix.n_expert > 0));
  if (needs_expert) {
    expert = &library.load_union(spec.demo_filter());
    if (expert->empty()) {
      throw ConfigError("experiment " + spec.id + ": demo pool is empty");
    }
  }

  std::vector<RunResult> results(spec.seeds.size());
  auto run_slot = [&](std::size_t i) {
    try {
      results[i] = run_one(spec, spec.seeds[i], sim, expert, options);
    } catch (const std::exception& e) {
      results[i].spec_id = spec.id;
      results[i].seed = spec.seeds[i];
      results[i].failed = true;
      results[i].failure = e.what();
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || spec.seeds.size() <= 1) {
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) run_slot(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), spec.seeds.size());
    workers.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < results.size(); i = next.fetch_add(1)) {
          run_slot(i);
        }
      });
    }
    for (std::thread& t : workers) t.join();
  }
  return results;
}

std::vector<SpecSummary> summarize(const std::vector<RunResult>& results) {
  std::vector<SpecSummary> out;
  std::vector<std::vector<double>> means;
  for (const RunResult& r : results) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SpecSummary& s) { return s.spec_id == r.spec_id; });
    if (it == out.end()) {
      out.push_back({r.spec_id, 0, 0, 0.0, 0.0});
      means.emplace_back();
      it = std::prev(out.end());
    }
    const std::size_t idx = static_cast<std::size_t>(it - out.begin());
    ++it->n_seeds;
    if (r.failed) {
      ++it->n_failed;  // failed episodes are reported but excluded from the stats
    } else {
      means[idx].push_back(r.mean_step_reward);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].reward_mean = mean_of(means[i]);
    out[i].reward_std = sample_std(means[i]);
  }
  return out;
}

void emit_report(const std::vector<RunResult>& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "traces", ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  const std::string results_path = (fs::path(out_dir) / "results.csv").string();
  std::ofstream res(results_path);
  if (!res) throw IoError("cannot write " + results_path);
  res << "spec_id,seed,mean_step_reward,std_step_reward,fallback_count,"
         "prompt_chars_min,prompt_chars_mean,prompt_chars_max,failed,failure\n";
  for (const RunResult& r : results) {
    res << csv_escape(r.spec_id) << ',' << r.seed << ',' << fmt_double(r.mean_step_reward)
        << ',' << fmt_double(r.std_step_reward) << ',' << r.fallback_count << ','
        << r.prompt_chars.min << ',' << fmt_double(r.prompt_chars.mean) << ','
        << r.prompt_chars.max << ',' << (r.failed ? 1 : 0) << ','
        << csv_escape(r.failure) << '\n';
  }

  write_summary_csv(summarize(results), (fs::path(out_dir) / "summary.csv").string());

  for (const RunResult& r : results) {
    if (r.failed) continue;
    const std::string path =
        (fs::path(out_dir) / "traces" /
         (r.spec_id + "_seed" + std::to_string(r.seed) + ".csv"))
            .string();
    std::ofstream tr(path);
    if (!tr) throw IoError("cannot write " + path);
    const std::size_t n = r.states.empty() ? 0 : r.states.front().n_rooms();
    tr << "step";
    for (std::size_t i = 1; i <= n; ++i) tr << ",room_" << i;
    tr << ",outside_temp,ghi,ground_temp,occupant_power";
    for (std::size_t i = 1; i <= n; ++i) tr << ",action_" << i;
    tr << ",reward\n";
    for (std::size_t s = 0; s < r.states.size(); ++s) {
      tr << s;
      for (double t : r.states[s].room_temps) tr << ',' << fmt_double(t);
      tr << ',' << fmt_double(r.states[s].outside_temp) << ','
         << fmt_double(r.states[s].ghi) << ',' << fmt_double(r.states[s].ground_temp)
         << ',' << fmt_double(r.states[s].occupant_power);
      for (double a : r.actions[s].values) tr << ',' << fmt_double(a);
      tr << ',' << fmt_double(r.rewards[s]) << '\n';
    }
  }
}

void write_summary_csv(const std::vector<SpecSummary>& summaries, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "spec_id,n_seeds,n_failed,reward_mean,reward_std\n";
  for (const SpecSummary& s : summaries) {
    out << csv_escape(s.spec_id) << ',' << s.n_seeds << ',' << s.n_failed << ','
        << fmt_double(s.reward_mean) << ',' << fmt_double(s.reward_std) << '\n';
  }
}

std::vector<SpecSummary> summarize_results_csv(const std::string& results_csv) {
  std::ifstream in(results_csv);
  if (!in) throw IoError("cannot open " + results_csv);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty results file: " + results_csv);

  std::vector<RunResult> results;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv_split(line);
    if (fields.size() < 10) throw ConfigError("malformed results row: " + line);
    RunResult r;
    r.spec_id = fields[0];
    r.seed = std::strtoull(fields[1].c_str(), nullptr, 10);
    r.mean_step_reward = std::strtod(fields[2].c_str(), nullptr);
    r.std_step_reward = std::strtod(fields[3].c_str(), nullptr);
    r.fallback_count = std::strtoull(fields[4].c_str(), nullptr, 10);
    r.failed = fields[8] == "1";
    r.failure = fields[9];
    results.push_back(std::move(r));
  }
  return summarize(results);
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (in && std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string response = line.substr(tab + 1);
    std::string unescaped;
    unescaped.reserve(response.size());
    for (std::size_t i = 0; i < response.size(); ++i) {
      if (response[i] == '\\' && i + 1 < response.size()) {
        ++i;
        unescaped += response[i] == 'n' ? '\n' : response[i];
      } else {
        unescaped += response[i];
      }
    }
    entries_[line.substr(0, tab)] = std::move(unescaped);
  }
}

std::optional<std::string> ResponseCache::get(const std::string& prompt) {
  std::lock_guard lock(mu_);
  char key[32];
  std::snprintf(key, sizeof(key), "%016llx",
                static_cast<unsigned long long>(fnv1a_text(prompt)));
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const std::string& prompt, const std::string& response) {
  std::lock_guard lock(mu_);
  char key[32];
  std::snprintf(key, sizeof(key), "%016llx",
                static_cast<unsigned long long>(fnv1a_text(prompt)));
  if (!entries_.emplace(key, response).second) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) return;  // cache is best-effort
  std::string escaped;
  escaped.reserve(response.size());
  for (char c : response) {
    if (c == '\n') escaped += "\\n";
    else if (c == '\\') escaped += "\\\\";
    else escaped += c;
  }
  out << key << '\t' << escaped << '\n';
}

namespace {

const std::vector<std::string> kSpecKeys = {
    "group", "building", "weather", "alpha", "target_temp", "episode_len",
    "noise_sigma", "seeds", "controller", "demo_mix", "include_description",
    "include_instructions", "manual_comments", "self_comment", "rounded",
    "random_demos", "proportional_gain", "mpc_horizon", "mpc_population",
    "mpc_elites", "mpc_iterations", "mpc_init_std", "demo_buildings", "demo_weathers"};

void check_known_keys(const ConfigSection& sec) {
  for (const auto& [key, value] : sec.entries) {
    if (std::find(kSpecKeys.begin(), kSpecKeys.end(), key) == kSpecKeys.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + sec.name + "]");
    }
  }
}

void apply_section(const ConfigSection& sec, ExperimentSpec* spec) {
  check_known_keys(sec);
  if (sec.has("group")) spec->group = group_from_string(sec.get("group"));
  if (sec.has("building")) spec->target.building = building_from_string(sec.get("building"));
  if (sec.has("weather")) spec->target.weather = weather_from_string(sec.get("weather"));
  spec->target.alpha = config_double(sec, "alpha", spec->target.alpha);
  spec->target.target_temp = config_double(sec, "target_temp", spec->target.target_temp);
  spec->target.episode_len =
      static_cast<int>(config_int(sec, "episode_len", spec->target.episode_len));
  spec->target.noise_sigma = config_double(sec, "noise_sigma", spec->target.noise_sigma);
  if (sec.has("seeds")) {
    spec->seeds.clear();
    for (double s : config_doubles(sec, "seeds")) {
      spec->seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (sec.has("controller")) {
    spec->controller = controller_from_string(sec.get("controller"));
  }
  if (sec.has("demo_mix")) {
    const std::vector<double> mix = config_doubles(sec, "demo_mix");
    if (mix.size() != 3) throw ConfigError("'demo_mix' needs three counts (hist repr expert)");
    spec->flags.demo_mix = {static_cast<std::size_t>(mix[0]), static_cast<std::size_t>(mix[1]),
                            static_cast<std::size_t>(mix[2])};
  }
  spec->flags.include_description =
      config_bool(sec, "include_description", spec->flags.include_description);
  spec->flags.include_instructions =
      config_bool(sec, "include_instructions", spec->flags.include_instructions);
  spec->flags.manual_comments =
      config_bool(sec, "manual_comments", spec->flags.manual_comments);
  spec->flags.self_comment = config_bool(sec, "self_comment", spec->flags.self_comment);
  spec->flags.rounded = config_bool(sec, "rounded", spec->flags.rounded);
  spec->flags.random_demos = config_bool(sec, "random_demos", spec->flags.random_demos);
  spec->proportional_gain =
      config_double(sec, "proportional_gain", spec->proportional_gain);
  spec->mpc.horizon = static_cast<int>(config_int(sec, "mpc_horizon", spec->mpc.horizon));
  spec->mpc.population =
      static_cast<int>(config_int(sec, "mpc_population", spec->mpc.population));
  spec->mpc.elites = static_cast<int>(config_int(sec, "mpc_elites", spec->mpc.elites));
  spec->mpc.iterations =
      static_cast<int>(config_int(sec, "mpc_iterations", spec->mpc.iterations));
  spec->mpc.init_std = config_double(sec, "mpc_init_std", spec->mpc.init_std);
  if (sec.has("demo_buildings")) {
    spec->demo_buildings.clear();
    std::istringstream in(sec.get("demo_buildings"));
    std::string name;
    while (in >> name) spec->demo_buildings.push_back(building_from_string(name));
  }
  if (sec.has("demo_weathers")) {
    spec->demo_weathers.clear();
    std::istringstream in(sec.get("demo_weathers"));
    std::string name;
    while (in >> name) spec->demo_weathers.push_back(weather_from_string(name));
  }
}

}  // namespace

std::vector<ExperimentSpec> parse_experiment_text(const std::string& text,
                                                  const std::string& origin) {
  ExperimentSpec defaults;
  std::vector<ExperimentSpec> specs;
  bool have_defaults = false;
  bool defaults_set_mix = false;
  for (const ConfigSection& sec : parse_config_text(text, origin)) {
    if (sec.name == "defaults") {
      if (have_defaults) throw ConfigError("duplicate [defaults] section");
      have_defaults = true;
      defaults_set_mix = sec.has("demo_mix");
      apply_section(sec, &defaults);
      continue;
    }
    if (sec.name.rfind("experiment ", 0) == 0) {
      ExperimentSpec spec = defaults;
      spec.id = sec.name.substr(11);
      if (spec.id.empty()) throw ConfigError("experiment section needs an id");
      apply_section(sec, &spec);
      if (spec.group == Group::F && !sec.has("demo_mix") && !defaults_set_mix) {
        spec.flags.demo_mix = {4, 0, 0};  // history only when no mix was given
      }
      if (spec.group == Group::GPTRandom) spec.flags.random_demos = true;
      spec.validate();
      specs.push_back(std::move(spec));
      continue;
    }
    throw ConfigError(origin + ": unknown section [" + sec.name + "]");
  }
  if (specs.empty()) throw ConfigError(origin + ": no [experiment <id>] sections");
  return specs;
}

std::vector<ExperimentSpec> parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experiment file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_text(buf.str(), path);
}

}  // namespace hvaclab
