#include <benchmark/benchmark.h>

#include "shardsim/replay.hpp"
#include "shardsim/synth.hpp"

namespace {

const std::vector<shardsim::TraceRecord>& workload() {
  static const auto trace = [] {
    shardsim::WorkloadSpec spec;
    spec.vertices = 5000;
    spec.communities = 4;
    spec.zipf_exponent = 0.8;
    spec.duration = 28 * shardsim::kDay;
    spec.records_per_hour = 150;
    return shardsim::synth_trace(spec, 42).records;
  }();
  return trace;
}

void BM_Replay(benchmark::State& state) {
  shardsim::ReplayConfig cfg;
  cfg.k = 4;
  cfg.strategy = static_cast<shardsim::Strategy>(state.range(0));
  for (auto _ : state) {
    auto result = shardsim::run_replay(workload(), cfg);
    benchmark::DoNotOptimize(result.total_moves);
  }
  state.SetLabel(std::string(shardsim::to_string(cfg.strategy)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(workload().size()));
}
BENCHMARK(BM_Replay)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace
