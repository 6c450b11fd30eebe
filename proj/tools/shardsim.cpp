// shardsim: replay a blockchain interaction trace under a sharding strategy
// and report per-window edge-cut, balance and vertex moves.

#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shardsim/graph.hpp"
#include "shardsim/log.hpp"
#include "shardsim/multilevel.hpp"
#include "shardsim/replay.hpp"
#include "shardsim/report.hpp"
#include "shardsim/synth.hpp"
#include "shardsim/trace.hpp"
#include "shardsim/weighted_graph.hpp"

namespace fs = std::filesystem;
using namespace shardsim;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReplayArgs {
  std::string trace;
  std::string format;
  unsigned shards = 2;
  std::string strategy = "hashing";
  std::string metric_window = "4h";
  std::string repartition_interval = "14d";
  double cut_threshold = 0.3;
  double balance_threshold = 1.5;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  unsigned kl_rounds = 1;
  std::string weights = "window";
  bool lenient = false;
  std::string out;
  std::string out_format = "csv";
  std::string sweep;
  std::string export_graph;
};

struct PartitionArgs {
  std::string graph;
  std::string map;
  unsigned shards = 2;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  std::string out;
};

struct SynthArgs {
  std::string spec;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth;
  std::optional<std::size_t> vertices, communities, dummies;
  std::optional<double> inter, zipf, rate, contracts, internal_calls, rewire_at, rewire_fraction, dummy_at;
  std::optional<std::string> duration, dummy_span;
};

struct SummarizeArgs {
  std::string in;
  std::string out;
};

std::vector<ShardId> parse_sweep(const std::string& text) {
  std::string list = text;
  if (list.rfind("k=", 0) == 0) list = list.substr(2);
  std::vector<ShardId> ks;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const unsigned long k = std::stoul(item);
      if (k == 0) throw std::invalid_argument("zero");
      ks.push_back(static_cast<ShardId>(k));
    } catch (const std::exception&) {
      throw UsageError("--sweep expects k=K1,K2,... with positive integers");
    }
  }
  if (ks.empty()) throw UsageError("--sweep expects at least one shard count");
  return ks;
}

void emit(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  write_file(path, data);
}

std::string with_k_suffix(const std::string& path, ShardId k) {
  const fs::path p(path);
  fs::path out = p.parent_path() / (p.stem().string() + ".k" + std::to_string(k) + p.extension().string());
  return out.string();
}

ReplayConfig make_config(const ReplayArgs& a) {
  ReplayConfig cfg;
  cfg.k = a.shards;
  if (!parse_strategy(a.strategy, cfg.strategy)) throw UsageError("unknown strategy '" + a.strategy + "'");
  try {
    cfg.metric_window = parse_duration(a.metric_window);
    cfg.repartition_interval = parse_duration(a.repartition_interval);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.cut_threshold = a.cut_threshold;
  cfg.balance_threshold = a.balance_threshold;
  cfg.partitioner.balance_tolerance = a.epsilon;
  cfg.partitioner.hash_seed = a.seed;
  cfg.partitioner.rng_seed = a.seed;
  cfg.partitioner.kl_rounds = a.kl_rounds;
  cfg.weights = a.weights == "cumulative" ? WeightMode::Cumulative : WeightMode::Window;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int run_replay_command(const ReplayArgs& a) {
  const ReplayConfig base = make_config(a);
  std::optional<TraceFormat> format;
  if (!a.format.empty()) format = a.format == "jsonl" ? TraceFormat::Jsonl : TraceFormat::Csv;
  const ErrorPolicy policy = a.lenient ? ErrorPolicy::Lenient : ErrorPolicy::Strict;

  ParseResult parsed = read_trace_file(a.trace, format, policy);
  for (const auto& d : parsed.diagnostics) spdlog::warn("skipped {}", d);
  if (parsed.skipped > 0) spdlog::warn("{} of {} rows skipped", parsed.skipped, parsed.data_rows);
  for (const auto& w : validate_kinds(parsed.records, policy).warnings) spdlog::warn("{}", w);
  spdlog::info("loaded {} records from {}", parsed.records.size(), a.trace);

  std::vector<ShardId> ks{base.k};
  if (!a.sweep.empty()) {
    if (a.out.empty()) throw UsageError("--sweep needs --out (one file per shard count is written)");
    ks = parse_sweep(a.sweep);
  }

  auto run_one = [&](ShardId k) {
    ReplayConfig cfg = base;
    cfg.k = k;
    cfg.partitioner.k = k;
    return run_replay(parsed.records, cfg);
  };
  std::vector<std::future<ReplayResult>> jobs;
  for (const ShardId k : ks) jobs.push_back(std::async(std::launch::async, run_one, k));

  for (std::size_t i = 0; i < ks.size(); ++i) {
    const ReplayResult result = jobs[i].get();
    const auto rows = to_rows(result.samples, ks[i]);
    const std::string body = a.out_format == "json" ? samples_to_json(rows) : samples_to_csv(rows);
    emit(a.sweep.empty() ? a.out : with_k_suffix(a.out, ks[i]), body);
    spdlog::info("k={} strategy={}: {} windows, {} repartitions, {} moves", ks[i], a.strategy,
                 result.samples.size(), result.repartitions.size(), result.total_moves);
    if (result.refinement.violations > 0) {
      spdlog::error("{} refinement passes increased the cut", result.refinement.violations);
    }
  }

  if (!a.export_graph.empty()) {
    InteractionGraph graph;
    for (const auto& r : parsed.records) graph.apply(r);
    std::ofstream adjacency(a.export_graph + ".graph");
    std::ofstream sidecar(a.export_graph + ".map");
    if (!adjacency || !sidecar) throw TraceError(TraceError::Code::Io, 0, "cannot write graph export");
    export_adjacency(graph, adjacency, sidecar);
  }
  return 0;
}

int run_partition_command(const PartitionArgs& a) {
  std::ifstream in(a.graph);
  if (!in) throw TraceError(TraceError::Code::Io, 0, "cannot open '" + a.graph + "'");
  const WeightedGraph g = read_metis(in);

  std::vector<std::string> names;
  if (!a.map.empty()) {
    std::istringstream map(read_file(a.map));
    std::string line;
    while (std::getline(map, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) names.push_back(line);
    }
    if (names.size() != g.vertex_count()) {
      throw UsageError("--map lists " + std::to_string(names.size()) + " vertices, graph has " +
                       std::to_string(g.vertex_count()));
    }
  }

  PartitionerConfig cfg;
  cfg.k = a.shards;
  cfg.balance_tolerance = a.epsilon;
  cfg.rng_seed = a.seed;
  const PartitionOutcome outcome = multilevel_partition(g, cfg);

  std::string body;
  for (std::size_t v = 0; v < outcome.part.size(); ++v) {
    if (!names.empty()) body += names[v] + ",";
    body += std::to_string(outcome.part[v]) + "\n";
  }
  emit(a.out, body);
  std::cerr << "cut " << outcome.cut << " of " << g.total_edge_weight() << ", heaviest part "
            << outcome.max_part_weight << " of " << g.total_vertex_weight()
            << (outcome.infeasible_balance ? " (balance bound not met)" : "") << "\n";
  return 0;
}

int run_synth_command(const SynthArgs& a) {
  WorkloadSpec spec;
  if (!a.spec.empty()) spec = parse_workload_json(read_file(a.spec));
  if (a.vertices) spec.vertices = *a.vertices;
  if (a.communities) spec.communities = *a.communities;
  if (a.dummies) spec.dummy_vertices = *a.dummies;
  if (a.inter) spec.inter_probability = *a.inter;
  if (a.zipf) spec.zipf_exponent = *a.zipf;
  if (a.rate) spec.records_per_hour = *a.rate;
  if (a.contracts) spec.contract_fraction = *a.contracts;
  if (a.internal_calls) spec.internal_call_probability = *a.internal_calls;
  if (a.rewire_at) spec.rewire_at = *a.rewire_at;
  if (a.rewire_fraction) spec.rewire_fraction = *a.rewire_fraction;
  if (a.dummy_at) spec.dummy_at = *a.dummy_at;
  try {
    if (a.duration) spec.duration = parse_duration(*a.duration);
    if (a.dummy_span) spec.dummy_span = parse_duration(*a.dummy_span);
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const SyntheticTrace trace = synth_trace(spec, a.seed);
  const TraceFormat format = format_from_path(a.out).value_or(TraceFormat::Csv);
  emit(a.out, serialize_trace(trace.records, format));
  if (!a.truth.empty()) write_file(a.truth, truth_to_csv(trace));
  spdlog::info("wrote {} records over {} vertices", trace.records.size(), trace.addresses.size());
  return 0;
}

int run_summarize_command(const SummarizeArgs& a) {
  const auto rows = parse_samples_csv(read_file(a.in));
  emit(a.out, format_summary(summarize(rows)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging_from_env();

  CLI::App app{"shardsim - blockchain sharding trace replay"};
  app.require_subcommand(1);

  ReplayArgs replay;
  auto* rp = app.add_subcommand("replay", "Replay a trace under one strategy and emit per-window metrics");
  rp->add_option("--trace", replay.trace, "Trace file (.csv, .jsonl, optionally .gz)")->required();
  rp->add_option("--format", replay.format, "Override the trace format")->check(CLI::IsMember({"csv", "jsonl"}));
  rp->add_option("--shards", replay.shards, "Number of shards")->check(CLI::PositiveNumber);
  rp->add_option("--strategy", replay.strategy)
      ->check(CLI::IsMember({"hashing", "kl", "metis-full", "metis-window", "metis-threshold"}));
  rp->add_option("--metric-window", replay.metric_window, "Measurement window, e.g. 4h");
  rp->add_option("--repartition-interval", replay.repartition_interval, "Periodic repartition interval, e.g. 14d");
  rp->add_option("--cut-threshold", replay.cut_threshold, "metis-threshold: dynamic edge-cut trigger")
      ->check(CLI::NonNegativeNumber);
  rp->add_option("--balance-threshold", replay.balance_threshold, "metis-threshold: dynamic balance trigger")
      ->check(CLI::NonNegativeNumber);
  rp->add_option("--epsilon", replay.epsilon, "Allowed static imbalance of the multilevel partitioner")
      ->check(CLI::NonNegativeNumber);
  rp->add_option("--seed", replay.seed, "Seed for hashing and randomized partitioning");
  rp->add_option("--kl-rounds", replay.kl_rounds, "KL exchange rounds per repartition")->check(CLI::PositiveNumber);
  rp->add_option("--weights", replay.weights, "Dynamic metric weights")->check(CLI::IsMember({"window", "cumulative"}));
  rp->add_flag("--lenient", replay.lenient, "Skip malformed rows instead of failing");
  rp->add_option("--out", replay.out, "Output path (stdout when omitted)");
  rp->add_option("--out-format", replay.out_format)->check(CLI::IsMember({"csv", "json"}));
  rp->add_option("--sweep", replay.sweep, "Parallel replays over shard counts, e.g. k=2,4,8");
  rp->add_option("--export-graph", replay.export_graph, "Write PREFIX.graph and PREFIX.map for the full graph");

  PartitionArgs part;
  auto* pp = app.add_subcommand("partition", "Partition a graph in METIS adjacency format");
  pp->add_option("--graph", part.graph, "Adjacency file")->required();
  pp->add_option("--map", part.map, "Sidecar listing one vertex id per line");
  pp->add_option("--shards", part.shards)->check(CLI::PositiveNumber);
  pp->add_option("--epsilon", part.epsilon)->check(CLI::NonNegativeNumber);
  pp->add_option("--seed", part.seed);
  pp->add_option("--out", part.out, "Output path (stdout when omitted)");

  SynthArgs synth;
  auto* sp = app.add_subcommand("synth", "Generate a planted-community synthetic trace");
  sp->add_option("--spec", synth.spec, "Workload JSON; flags below override it");
  sp->add_option("--seed", synth.seed);
  sp->add_option("--out", synth.out, "Trace output (.csv/.jsonl, optionally .gz)")->required();
  sp->add_option("--truth", synth.truth, "Planted community file");
  sp->add_option("--vertices", synth.vertices);
  sp->add_option("--communities", synth.communities);
  sp->add_option("--inter-probability", synth.inter);
  sp->add_option("--zipf", synth.zipf);
  sp->add_option("--duration", synth.duration);
  sp->add_option("--rate", synth.rate, "Transactions per hour");
  sp->add_option("--contract-fraction", synth.contracts);
  sp->add_option("--internal-calls", synth.internal_calls);
  sp->add_option("--rewire-at", synth.rewire_at);
  sp->add_option("--rewire-fraction", synth.rewire_fraction);
  sp->add_option("--dummies", synth.dummies);
  sp->add_option("--dummy-at", synth.dummy_at);
  sp->add_option("--dummy-span", synth.dummy_span);

  SummarizeArgs summ;
  auto* up = app.add_subcommand("summarize", "Quartile table of a per-window sample file");
  up->add_option("--in", summ.in, "Samples CSV written by replay")->required();
  up->add_option("--out", summ.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*rp) return run_replay_command(replay);
    if (*pp) return run_partition_command(part);
    if (*sp) return run_synth_command(synth);
    if (*up) return run_summarize_command(summ);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
