#include <benchmark/benchmark.h>

#include "supcast/pipeline.hpp"
#include "supcast_tools/verify.hpp"

using namespace supcast;

namespace {

const Gop& cif() {
  static const Gop g = synthetic_gop(SyntheticKind::moving_pattern, 352, 288, 4, 7);
  return g;
}

struct Fixture {
  Scenario scenario;
  std::vector<ChannelState> states;
  ChunkedGop chunks;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    Rng rng(1);
    x.scenario.users = place_users(UserLayout{}, 2.0, rng);
    for (const auto& u : x.scenario.users)
      x.states.push_back({sample_gain(u, rng), x.scenario.sigma2()});
    x.chunks = chunk_gop(cif(), 8);
    return x;
  }();
  return f;
}

void BM_ForwardDct(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(forward_3d_dct(cif()));
}
BENCHMARK(BM_ForwardDct)->Unit(benchmark::kMillisecond);

void BM_InverseDct(benchmark::State& state) {
  const auto vol = forward_3d_dct(cif());
  for (auto _ : state) benchmark::DoNotOptimize(inverse_3d_dct(vol));
}
BENCHMARK(BM_InverseDct)->Unit(benchmark::kMillisecond);

void BM_Becma(benchmark::State& state) {
  Rng rng(2);
  const auto d = verify::uniform_distortion_matrix(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(becma(d, Driver::bl));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Becma)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNSquared);

void BM_Exhaustive7(benchmark::State& state) {
  Rng rng(3);
  const auto d = verify::uniform_distortion_matrix(7, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_match(d));
}
BENCHMARK(BM_Exhaustive7);

void BM_DistortionMatrix(benchmark::State& state) {
  const auto& f = fixture();
  const std::size_t m = 128;
  std::vector<double> bl, el;
  const auto order = rank_by_variance(f.chunks.chunks);
  for (std::size_t i = 0; i < m; ++i) {
    bl.push_back(f.chunks.chunks[order[i]].variance);
    el.push_back(f.chunks.chunks[order[m + i]].variance);
  }
  LinkParams link{f.states[0].h, f.states[7].h, f.scenario.sigma2(), 256.0};
  const auto budgets = preallocate(bl, el, link.p_total);
  for (auto _ : state) benchmark::DoNotOptimize(build_distortion_matrix(bl, el, budgets, link));
}
BENCHMARK(BM_DistortionMatrix)->Unit(benchmark::kMicrosecond);

void BM_EncodeSupcast(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(encode_supcast(f.chunks, f.scenario, f.states, Driver::bl));
}
BENCHMARK(BM_EncodeSupcast)->Unit(benchmark::kMillisecond);

void BM_SimulateUser(benchmark::State& state) {
  const auto& f = fixture();
  const auto plan = encode_supcast(f.chunks, f.scenario, f.states, Driver::bl);
  Rng rng(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        simulate_user(plan, f.chunks, cif(), 0, f.scenario.users[0], f.states[0], rng));
}
BENCHMARK(BM_SimulateUser)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
