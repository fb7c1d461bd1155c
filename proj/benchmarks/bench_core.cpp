#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "rms/locomotion.hpp"
#include "rms/mlp.hpp"
#include "rms/mutation.hpp"
#include "rms/network.hpp"
#include "rms/swingup.hpp"

namespace {

rms::Network grown_network(int ops) {
  rms::Network net(27, 8);
  rms::Rng rng(1);
  rms::MutationConfig cfg;
  rms::mutate_n(net, cfg, ops, rng);
  return net;
}

void BM_NetworkForward(benchmark::State& state) {
  rms::Network net = grown_network(static_cast<int>(state.range(0)));
  std::vector<double> obs(27, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(obs));
  state.counters["connections"] = static_cast<double>(net.connections().size());
}
BENCHMARK(BM_NetworkForward)->Arg(50)->Arg(500)->Arg(2000);

void BM_Mutate(benchmark::State& state) {
  const rms::Network net = grown_network(static_cast<int>(state.range(0)));
  rms::Rng rng(2);
  rms::MutationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rms::mutate(net, cfg, rng));
}
BENCHMARK(BM_Mutate)->Arg(50)->Arg(500)->Arg(2000);

void BM_MlpForward(benchmark::State& state) {
  const std::array<std::size_t, 2> hidden{64, 64};
  rms::Mlp mlp(27, hidden, 8);
  std::vector<double> obs(27, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(mlp.forward(obs));
}
BENCHMARK(BM_MlpForward);

void BM_SwingupStep(benchmark::State& state) {
  rms::SwingupEnv env(3);
  env.reset();
  const std::array<double, 1> action{0.3};
  for (auto _ : state) {
    if (env.step(action).done) env.reset();
  }
}
BENCHMARK(BM_SwingupStep);

void BM_QuadPodStep(benchmark::State& state) {
  rms::QuadPodEnv env(4);
  env.reset();
  std::array<double, 8> action{};
  action.fill(0.5);
  for (auto _ : state) {
    if (env.step(action).done) env.reset();
  }
}
BENCHMARK(BM_QuadPodStep);

}  // namespace

BENCHMARK_MAIN();
