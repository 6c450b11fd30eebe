#include <benchmark/benchmark.h>

#include "shardsim/synth.hpp"
#include "shardsim/trace.hpp"

namespace {

void BM_ParseTrace(benchmark::State& state) {
  shardsim::WorkloadSpec spec;
  spec.vertices = 10000;
  spec.duration = 7 * shardsim::kDay;
  spec.records_per_hour = 600;
  const auto format = static_cast<shardsim::TraceFormat>(state.range(0));
  const std::string text = shardsim::serialize_trace(shardsim::synth_trace(spec, 1).records, format);
  for (auto _ : state) {
    auto parsed = shardsim::parse_trace(text, format);
    benchmark::DoNotOptimize(parsed.records.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
  state.SetLabel(format == shardsim::TraceFormat::Csv ? "csv" : "jsonl");
}
BENCHMARK(BM_ParseTrace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
