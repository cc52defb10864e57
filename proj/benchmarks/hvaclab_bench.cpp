#include <benchmark/benchmark.h>

#include <random>

#include "hvaclab/control.hpp"
#include "hvaclab/demostore.hpp"
#include "hvaclab/promptgen.hpp"
#include "hvaclab/rng.hpp"
#include "hvaclab/simulator.hpp"

namespace {

using namespace hvaclab;

ScenarioConfig medium_cooldry() {
  ScenarioConfig cfg;
  cfg.building = Building::OfficeMedium;
  cfg.weather = Weather::CoolDry;
  cfg.seed = 1;
  return cfg;
}

DemoDataset synthetic_dataset(std::size_t count) {
  ScenarioConfig cfg = medium_cooldry();
  Simulator sim(cfg);
  auto expert = make_proportional_controller(0.25);
  return collect_expert_demos(cfg, sim, *expert, count);
}

void BM_Embed(benchmark::State& state) {
  const std::string text =
      "You are controlling the HVAC of a medium office building in a cool and dry "
      "climate. Room 1 temperature: 21 degrees Celsius. Room 2 temperature: 20 degrees "
      "Celsius. The target temperature is 22 degrees Celsius.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed(text));
  }
}
BENCHMARK(BM_Embed);

void BM_KnnLookup(benchmark::State& state) {
  const DemoDataset ds = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  const Embedding query = ds.records[0].key;
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn(query, ds, 4));
  }
}
BENCHMARK(BM_KnnLookup)->Arg(240)->Arg(960)->Arg(4800);

void BM_KmeansRepresentatives(benchmark::State& state) {
  const DemoDataset ds = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans_representatives(ds, 2, 1));
  }
}
BENCHMARK(BM_KmeansRepresentatives)->Arg(240)->Arg(960);

void BM_SimulatorStep(benchmark::State& state) {
  const ScenarioConfig cfg = medium_cooldry();
  Simulator sim(cfg);
  Episode ep = sim.reset(cfg);
  const ActionVector a{std::vector<double>(sim.n_rooms(), 0.3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.step_state(ep.state, a, 0, cfg));
  }
}
BENCHMARK(BM_SimulatorStep);

void BM_MpcAct(benchmark::State& state) {
  const ScenarioConfig cfg = medium_cooldry();
  Simulator sim(cfg);
  const Episode ep = sim.reset(cfg);
  MpcConfig mpc;
  mpc.seed = 1;
  auto controller = make_mpc_controller(mpc, sim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(controller->act({ep.state, 0, cfg}));
  }
}
BENCHMARK(BM_MpcAct);

void BM_BuildPrompt(benchmark::State& state) {
  const ScenarioConfig cfg = medium_cooldry();
  Simulator sim(cfg);
  const Episode ep = sim.reset(cfg);
  const DemoDataset ds = synthetic_dataset(240);
  OnlineBuffer buffer(64);
  const std::vector<TaggedDemo> demos =
      select_demos(ds.records[0].key, buffer, ds, {0, 2, 4}, 1);
  PromptFlags flags;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_prompt(ep.state, cfg, demos, flags));
  }
}
BENCHMARK(BM_BuildPrompt);

void BM_MockPipelineStep(benchmark::State& state) {
  const ScenarioConfig cfg = medium_cooldry();
  Simulator sim(cfg);
  MockChatModel model(cfg);
  OnlineBuffer buffer(64);
  LlmControllerOptions options;
  options.flags.demo_mix = {4, 0, 0};
  auto controller = make_llm_controller(model, options, nullptr, buffer);
  Episode ep = sim.reset(cfg);
  for (auto _ : state) {
    const ActionVector a = controller->act({ep.state, ep.step_index, cfg});
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_MockPipelineStep);

}  // namespace

BENCHMARK_MAIN();
