#include <benchmark/benchmark.h>

#include "ratsteer/world.hpp"

using namespace ratsteer;

static void BM_WorldStep(benchmark::State& state) {
  WorldConfig cfg;
  cfg.ue_count = static_cast<int>(state.range(0));
  cfg.per_ue_load_mbps = 10.0;
  World w(cfg, 17);
  for (auto _ : state) {
    w.step();
  }
  state.SetItemsProcessed(state.iterations() * cfg.ue_count);
}
BENCHMARK(BM_WorldStep)->Arg(20)->Arg(60);

BENCHMARK_MAIN();
