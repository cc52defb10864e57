#include "hvaclab/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hvaclab/rng.hpp"
#include "hvaclab/translate.hpp"

namespace hvaclab {

void MpcConfig::validate() const {
  if (horizon < 1) throw ConfigError("mpc horizon must be >= 1");
  if (population < 2) throw ConfigError("mpc population must be >= 2");
  if (elites < 1 || elites > population) throw ConfigError("mpc elites must be in [1, population]");
  if (iterations < 1) throw ConfigError("mpc iterations must be >= 1");
  if (init_std <= 0.0) throw ConfigError("mpc init_std must be > 0");
}

namespace {

class RandomController final : public Controller {
 public:
  explicit RandomController(std::uint64_t seed) : rng_(mix_seed(seed, 0x52414e44u)) {}

  ActionVector act(const EpisodeView& view) override {
    ActionVector a;
    a.values.resize(view.state.n_rooms());
    for (double& v : a.values) v = uniform_range(rng_, -1.0, 1.0);
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

class ZeroController final : public Controller {
 public:
  ActionVector act(const EpisodeView& view) override {
    ActionVector a;
    a.values.assign(view.state.n_rooms(), 0.0);
    return a;
  }
};

class ProportionalController final : public Controller {
 public:
  explicit ProportionalController(double gain) : gain_(gain) {
    if (gain <= 0.0) throw ConfigError("proportional gain must be > 0");
  }

  ActionVector act(const EpisodeView& view) override {
    ActionVector a;
    a.values.reserve(view.state.n_rooms());
    for (double t : view.state.room_temps) {
      a.values.push_back(std::clamp(gain_ * (view.cfg.target_temp - t), -1.0, 1.0));
    }
    return a;
  }

 private:
  double gain_;
};

class MpcController final : public Controller {
 public:
  MpcController(const MpcConfig& cfg, const Simulator& sim)
      : cfg_(cfg), sim_(sim), rng_(mix_seed(cfg.seed, 0x4d504355u)) {
    cfg_.validate();
  }

  ActionVector act(const EpisodeView& view) override {
    const std::size_t n = view.state.n_rooms();
    const int horizon = std::min(cfg_.horizon, view.cfg.episode_len - view.step);
    if (horizon < 1) throw StateError("mpc: no steps left to plan");
    const std::size_t dims = static_cast<std::size_t>(horizon) * n;

    std::vector<double> mean(dims, 0.0);
    if (warm_mean_.size() == static_cast<std::size_t>(cfg_.horizon) * n) {
      // Shift the previous solution by one step; the fresh tail stays at 0.
      for (std::size_t d = 0; d + n < warm_mean_.size() && d < dims; ++d) {
        mean[d] = warm_mean_[d + n];
      }
    }
    std::vector<double> stddev(dims, cfg_.init_std);

    const std::size_t population = static_cast<std::size_t>(cfg_.population);
    const std::size_t elite_count = static_cast<std::size_t>(cfg_.elites);
    std::vector<std::vector<double>> samples(population, std::vector<double>(dims));
    std::vector<double> scores(population);
    std::vector<std::vector<double>> elites;

    double prev_elite_mean = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < cfg_.iterations; ++iter) {
      // Retained elites stay at the front of the population.
      const std::size_t keep = std::min(elites.size(), population);
      for (std::size_t p = 0; p < keep; ++p) samples[p] = elites[p];
      for (std::size_t p = keep; p < population; ++p) {
        for (std::size_t d = 0; d < dims; ++d) {
          samples[p][d] = std::clamp(normal(rng_, mean[d], stddev[d]), -1.0, 1.0);
        }
      }
      for (std::size_t p = 0; p < population; ++p) {
        scores[p] = rollout(view, samples[p], horizon);
      }

      std::vector<std::size_t> order(population);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

      elites.clear();
      double elite_sum = 0.0;
      for (std::size_t e = 0; e < elite_count; ++e) {
        elites.push_back(samples[order[e]]);
        elite_sum += scores[order[e]];
      }
      const double elite_mean_score = elite_sum / static_cast<double>(elite_count);
      if (elite_mean_score < prev_elite_mean - 1e-12) {
        throw StateError("mpc: elite mean score decreased across iterations");
      }
      prev_elite_mean = elite_mean_score;

      for (std::size_t d = 0; d < dims; ++d) {
        double m = 0.0;
        for (const auto& e : elites) m += e[d];
        m /= static_cast<double>(elite_count);
        double var = 0.0;
        for (const auto& e : elites) var += (e[d] - m) * (e[d] - m);
        var /= static_cast<double>(elite_count);
        mean[d] = m;
        stddev[d] = std::max(std::sqrt(var), 1e-3);
      }
    }

    warm_mean_.assign(static_cast<std::size_t>(cfg_.horizon) * n, 0.0);
    std::copy(mean.begin(), mean.end(), warm_mean_.begin());

    ActionVector a;
    a.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) a.values.push_back(std::clamp(mean[i], -1.0, 1.0));
    return a;
  }

 private:
  double rollout(const EpisodeView& view, const std::vector<double>& seq, int horizon) const {
    StateVector state = view.state;
    const std::size_t n = state.n_rooms();
    double total = 0.0;
    ActionVector a;
    a.values.resize(n);
    for (int h = 0; h < horizon; ++h) {
      for (std::size_t i = 0; i < n; ++i) {
        a.values[i] = seq[static_cast<std::size_t>(h) * n + i];
      }
      StepOutcome out = sim_.step_state(state, a, view.step + h, view.cfg);
      total += out.reward;
      state = std::move(out.next_state);
    }
    return total;
  }

  MpcConfig cfg_;
  const Simulator& sim_;
  std::mt19937_64 rng_;
  std::vector<double> warm_mean_;
};

class LlmController final : public Controller {
 public:
  LlmController(ChatModel& model, const LlmControllerOptions& options,
                const DemoDataset* expert, OnlineBuffer& buffer)
      : model_(model),
        options_(options),
        expert_(expert),
        buffer_(buffer),
        random_rng_(mix_seed(options.seed, 0x52444d53u)) {
    const DemoMix& mix = options_.flags.demo_mix;
    const bool needs_expert =
        options_.flags.random_demos ? mix.total() > 0 : (mix.n_repr > 0 || mix.n_expert > 0);
    if (needs_expert && (expert_ == nullptr || expert_->empty())) {
      throw ConfigError("llm controller: demo mix needs an expert dataset");
    }
  }

  ActionVector act(const EpisodeView& view) override {
    const ScenarioConfig& cfg = view.cfg;
    scenario_ = cfg;  // observe() renders demo texts under the acting scenario
    has_scenario_ = true;
    const std::string meta = meta_translate(cfg).text;
    const std::string state_text = state_translate(view.state, cfg, /*rounded=*/true).text;

    std::vector<TaggedDemo> demos;
    if (options_.flags.random_demos) {
      const std::size_t want = options_.flags.demo_mix.total();
      demos = random_demos(*expert_, std::min(want, expert_->size()), random_rng_);
    } else if (options_.flags.demo_mix.total() > 0) {
      static const DemoDataset kEmpty;
      const DemoDataset& expert = expert_ ? *expert_ : kEmpty;
      demos = select_demos(embed(meta + state_text), buffer_, expert,
                           options_.flags.demo_mix, options_.seed, &rep_cache_);
    }

    PromptBundle prompt = budget_check(
        build_prompt(view.state, cfg, demos, options_.flags), options_.max_prompt_chars);
    prompt_chars_.push_back(prompt.char_len);

    const std::size_t n = view.state.n_rooms();
    for (int attempt = 0; attempt <= options_.parse_reasks; ++attempt) {
      const LlmResponse response = model_.complete(prompt);
      if (options_.on_exchange) options_.on_exchange(prompt.full_text, response.raw_text);
      try {
        const std::vector<long long> ints = parse_actions(response.raw_text, n);
        last_action_ = action_untranslate(ints, n);
        return last_action_;
      } catch (const ParseError&) {
        // fall through to re-ask
      }
    }

    ++fallbacks_;
    if (last_action_.size() != n) last_action_.values.assign(n, 0.0);
    return last_action_;  // previous action, or zeros on step 0
  }

  void observe(const Transition& transition) override {
    if (!has_scenario_) throw StateError("llm controller: observe() before any act()");
    buffer_.push(make_demo_record(scenario_, transition.state, transition.action,
                                  transition.outcome));
  }

  std::size_t fallback_count() const override { return fallbacks_; }
  const std::vector<std::size_t>* prompt_chars() const override { return &prompt_chars_; }

 private:
  ChatModel& model_;
  LlmControllerOptions options_;
  const DemoDataset* expert_;
  OnlineBuffer& buffer_;
  RepresentativeCache rep_cache_;
  std::mt19937_64 random_rng_;
  ActionVector last_action_;
  std::vector<std::size_t> prompt_chars_;
  std::size_t fallbacks_ = 0;
  ScenarioConfig scenario_{};
  bool has_scenario_ = false;
};

}  // namespace

std::unique_ptr<Controller> make_random_controller(std::uint64_t seed) {
  return std::make_unique<RandomController>(seed);
}

std::unique_ptr<Controller> make_zero_controller() {
  return std::make_unique<ZeroController>();
}

std::unique_ptr<Controller> make_proportional_controller(double gain) {
  return std::make_unique<ProportionalController>(gain);
}

std::unique_ptr<Controller> make_mpc_controller(const MpcConfig& cfg, const Simulator& sim) {
  return std::make_unique<MpcController>(cfg, sim);
}

std::unique_ptr<Controller> make_llm_controller(ChatModel& model,
                                                const LlmControllerOptions& options,
                                                const DemoDataset* expert,
                                                OnlineBuffer& buffer) {
  return std::make_unique<LlmController>(model, options, expert, buffer);
}

DemoDataset collect_expert_demos(const ScenarioConfig& scenario, const Simulator& sim,
                                 Controller& expert, std::size_t n_transitions) {
  if (n_transitions == 0) throw ConfigError("n_transitions must be > 0");
  DemoDataset ds;
  ds.records.reserve(n_transitions);
  std::uint64_t episode = 0;
  while (ds.records.size() < n_transitions) {
    ScenarioConfig cfg = scenario;
    cfg.seed = scenario.seed + episode;
    Episode ep = sim.reset(cfg);
    while (!ep.finished() && ds.records.size() < n_transitions) {
      const StateVector before = ep.state;
      const ActionVector action =
          validate_action(expert.act({ep.state, ep.step_index, cfg}).values,
                          sim.n_rooms());
      const StepOutcome outcome = sim.step(ep, action);
      expert.observe({before, action, outcome});
      ds.records.push_back(make_demo_record(cfg, before, action, outcome));
    }
    ++episode;
  }
  return ds;
}

}  // namespace hvaclab
