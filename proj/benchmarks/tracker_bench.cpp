#include <benchmark/benchmark.h>

#include <memory>

#include "siamreid/evaluation.hpp"
#include "siamreid/providers.hpp"
#include "siamreid/simulator.hpp"
#include "siamreid/tracker.hpp"

using namespace siamreid;

namespace {

// One full 300-frame simulated sequence; arg: confuser count.
void BM_TrackScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.num_confusers = static_cast<int>(state.range(0));
  cfg.occlusion_windows = {{100, 130}};
  cfg.seed = 5;
  const auto scenario = generate(cfg);
  const VectorFrameSource frames(scenario.frames);
  for (auto _ : state) {
    Tracker tracker({}, std::make_shared<OracleProvider>(OracleConfig{0.9, 0.5, 5}),
                    std::make_shared<IdentityEmbedder>());
    benchmark::DoNotOptimize(run_sequence(frames, scenario.target().trajectory.front(), tracker));
  }
  state.SetItemsProcessed(state.iterations() * cfg.num_frames);
}
BENCHMARK(BM_TrackScenario)->Arg(0)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GenerateScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.seed = 6;
  for (auto _ : state) benchmark::DoNotOptimize(generate(cfg));
}
BENCHMARK(BM_GenerateScenario)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.seed = 7;
  const auto s = generate(cfg);
  SequenceResult r{"bench", {}, {}};
  for (const auto& b : s.target().trajectory) {
    r.ground_truth.emplace_back(b);
    r.predictions.emplace_back(b.translated(1.5, -0.5));
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(r));
}
BENCHMARK(BM_Evaluate);

}  // namespace
