#include <benchmark/benchmark.h>

#include <random>

#include "ratsteer/approximator.hpp"

using namespace ratsteer;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<Transition> random_batch(std::size_t n, std::size_t dim, int actions,
                                     std::mt19937_64& rng) {
  std::uniform_int_distribution<int> a(0, actions - 1);
  std::uniform_real_distribution<double> r(-1.0, 1.0);
  std::vector<Transition> batch(n);
  for (auto& t : batch) {
    t.state = random_vec(dim, rng);
    t.next_state = random_vec(dim, rng);
    t.choice = a(rng);
    t.reward = r(rng);
  }
  return batch;
}

}  // namespace

static void BM_Forward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  ValueNet net({16, hidden, hidden, 4}, 1e-3, 0.9, 5);
  const auto input = random_vec(16, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(input));
  }
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(128);

static void BM_TdUpdate(benchmark::State& state) {
  const std::size_t batch_size = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  ValueNet net({16, 64, 64, 4}, 1e-3, 0.9, 5);
  const auto batch = random_batch(batch_size, 16, 4, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.td_update(batch));
  }
  state.SetItemsProcessed(state.iterations() * batch_size);
}
BENCHMARK(BM_TdUpdate)->Arg(16)->Arg(64);

static void BM_ReplaySample(benchmark::State& state) {
  std::mt19937_64 rng(3);
  ReplayBuffer buf(10000, 32);
  for (auto& t : random_batch(10000, 16, 4, rng)) buf.push(std::move(t));
  for (auto _ : state) {
    benchmark::DoNotOptimize(buf.sample(rng));
  }
}
BENCHMARK(BM_ReplaySample);
