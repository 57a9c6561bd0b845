#include <benchmark/benchmark.h>

#include <random>

#include "ratsteer/netsim.hpp"

using namespace ratsteer;

namespace {

Packet make_packet(int flow, int bytes, long step) {
  Packet p;
  p.flow = flow;
  p.size_bytes = bytes;
  p.arrival_step = step;
  return p;
}

}  // namespace

static void BM_QueueEnqueueServe(benchmark::State& state) {
  const int num_flows = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> flow_of(0, num_flows - 1);
  RatQueue q(0, 2000);
  long step = 0;
  for (auto _ : state) {
    for (int i = 0; i < 64; ++i) q.enqueue(make_packet(flow_of(rng), 250, step));
    auto served = q.serve_step(64 * 250 * 8.0, step);
    benchmark::DoNotOptimize(served);
    ++step;
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_QueueEnqueueServe)->Arg(4)->Arg(60);

static void BM_QueueServeFlows(benchmark::State& state) {
  const int num_flows = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> flow_of(0, num_flows - 1);
  std::uniform_real_distribution<double> budget(0.0, 4000.0);
  RatQueue q(0, 2000);
  std::vector<double> bits(num_flows);
  long step = 0;
  for (auto _ : state) {
    for (int i = 0; i < 64; ++i) q.enqueue(make_packet(flow_of(rng), 250, step));
    for (auto& b : bits) b = budget(rng);
    auto served = q.serve_flows(bits, step);
    benchmark::DoNotOptimize(served);
    ++step;
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_QueueServeFlows)->Arg(4)->Arg(60);

static void BM_DelayPercentile(benchmark::State& state) {
  KpiCounters kpi;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 200.0);
  for (int i = 0; i < 100000; ++i) kpi.record_delay(d(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpi.delay_percentile_ms(0.95));
  }
}
BENCHMARK(BM_DelayPercentile);
