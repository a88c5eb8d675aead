#include <benchmark/benchmark.h>

#include "ploco/belief/networks.hpp"
#include "ploco/commands.hpp"
#include "ploco/extero.hpp"
#include "ploco/nn/layers.hpp"
#include "ploco/rewards.hpp"
#include "ploco/synthwalker.hpp"
#include "ploco/terrain.hpp"

using namespace ploco;

static void BM_TerrainGenerate(benchmark::State& state) {
  const auto mode = static_cast<TerrainMode>(state.range(0));
  const TerrainSpec spec = TerrainSpec::random(mode, 1);
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec, GridSize{400, 400}, 0.05, 1.0));
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_TerrainGenerate)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

static void BM_ExteroSampleNoisy(benchmark::State& state) {
  const HeightField field = generate(TerrainSpec::random(TerrainMode::kHills, 2), GridSize{400, 400}, 0.05, 1.0);
  const SamplePattern pattern = build_pattern(state.range(0) ? RingLayout::full() : RingLayout::desk());
  const NoiseProfile noise = NoiseProfile::for_mode(NoiseMode::kNoisy, 3);
  const NoiseEpisodeState episode = NoiseEpisodeState::begin(noise, 0, Foot::kLeft);
  std::int64_t t = 0;
  for (auto _ : state) {
    const ExteroSample clean = sample_clean(field, {1.0, -0.5}, 0.3, pattern, Foot::kLeft);
    benchmark::DoNotOptimize(apply_noise(clean, field, noise, episode, t++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pattern.size()));
}
BENCHMARK(BM_ExteroSampleNoisy)->Arg(0)->Arg(1);

static void BM_LstmStep(benchmark::State& state) {
  const auto hidden = static_cast<nn::Index>(state.range(0));
  nn::LstmCell cell("cell", hidden, hidden);
  Rng rng(4);
  cell.initialize(rng);
  const nn::Matrix x = nn::Matrix::Random(hidden, 12);
  auto s = nn::LstmCell::State::zeros(hidden, 12);
  for (auto _ : state) {
    s = cell.step(x, s);
    benchmark::DoNotOptimize(s.h.data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(32)->Arg(256);

static void BM_StudentStep(benchmark::State& state) {
  const auto config = state.range(0) ? belief::ArchitectureConfig::paper() : belief::ArchitectureConfig::desk();
  belief::StudentPolicy student(config);
  Rng rng(5);
  student.initialize(rng);
  auto s = student.initial_state();
  const nn::Matrix p = nn::Matrix::Random(44, 1);
  const nn::Matrix l = nn::Matrix::Random(config.pattern_size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(student.step(p, l, l, s).action.data());
  state.SetLabel(config.name);
}
BENCHMARK(BM_StudentStep)->Arg(0)->Arg(1);

static void BM_TotalReward(benchmark::State& state) {
  RobotState s;
  s.v_xy = {0.4, 0.1};
  s.foot_force_norm = {0.5, 0.0};
  const GaitClocks clocks = gait_clocks(0.2);
  CurriculumState c;
  for (auto _ : state) benchmark::DoNotOptimize(total_reward(s, {{0.5, 0.0}, 0.1}, clocks, {}, {}, c).total);
}
BENCHMARK(BM_TotalReward);

static void BM_SampleCommand(benchmark::State& state) {
  const auto dist = CommandDistribution::table_default();
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(sample_command(dist, rng));
}
BENCHMARK(BM_SampleCommand);

static void BM_RollTrajectory(benchmark::State& state) {
  const HeightField field = generate(TerrainSpec::random(TerrainMode::kStairs, 7), GridSize{400, 400}, 0.05, 1.0);
  WalkSpec spec;
  spec.command = {{0.6, 0.0}, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(roll_trajectory(spec, field).steps.size());
}
BENCHMARK(BM_RollTrajectory)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
