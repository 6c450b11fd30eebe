#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shardsim/graph.hpp"
#include "shardsim/metrics.hpp"
#include "shardsim/multilevel.hpp"
#include "shardsim/partition.hpp"
#include "shardsim/trace.hpp"

namespace shardsim {

enum class Strategy { Hashing, KL, MetisFull, MetisWindow, MetisThreshold };

/// CLI spelling: hashing, kl, metis-full, metis-window, metis-threshold.
std::string_view to_string(Strategy s);
bool parse_strategy(std::string_view text, Strategy& out);

/// Dynamic metrics use either the current window's counts or all-history counts.
enum class WeightMode { Window, Cumulative };

inline constexpr std::uint64_t kHour = 3600;
inline constexpr std::uint64_t kDay = 24 * kHour;

/// Parses "90s", "30m", "4h", "14d", "2w" or a bare number of seconds.
/// Throws std::invalid_argument on anything else or on zero.
std::uint64_t parse_duration(std::string_view text);

struct ReplayConfig {
  ShardId k = 2;
  Strategy strategy = Strategy::Hashing;
  std::uint64_t metric_window = 4 * kHour;
  std::uint64_t repartition_interval = 14 * kDay;
  /// Threshold strategy fires when the last window's dynamic edge-cut
  /// exceeds cut_threshold or its dynamic balance exceeds balance_threshold.
  double cut_threshold = 0.3;
  double balance_threshold = 1.5;
  PartitionerConfig partitioner;
  WeightMode weights = WeightMode::Window;
  /// Keep (before, after) assignments of every repartition in the result.
  bool keep_history = false;

  /// Throws std::invalid_argument on k == 0, a zero window, an interval
  /// shorter than the window, or negative tolerances/thresholds.
  void validate() const;
};

struct RepartitionEvent {
  std::uint64_t timestamp = 0;
  std::size_t moves = 0;      ///< after relabelling new shards onto old ones
  std::size_t raw_moves = 0;  ///< before relabelling
  std::size_t input_vertices = 0;
};

struct ReplayResult {
  std::vector<MetricSample> samples;
  std::size_t total_moves = 0;
  std::vector<std::uint64_t> repartition_timestamps;
  std::vector<RepartitionEvent> repartitions;
  Assignment final_assignment;
  RefinementStats refinement;
  std::size_t infeasible_partitions = 0;
  std::vector<std::pair<Assignment, Assignment>> history;
};

/// Whether to repartition at window boundary `clock`. Hashing never fires;
/// the periodic strategies fire once clock - last_repart reaches the
/// interval; the threshold strategy looks only at `last_sample`.
bool fire_trigger(Strategy strategy, std::uint64_t clock, std::uint64_t last_repart,
                  const MetricSample& last_sample, const ReplayConfig& cfg);

/// Renames the shards of `fresh` so that each new shard takes the old label
/// it shares the most vertices with (greedy maximum-overlap matching). Pure
/// label permutations therefore map back to the old labels.
Assignment match_labels(const Assignment& old, const Assignment& fresh);

struct RepartitionOutcome {
  Assignment assignment;
  std::size_t moves = 0;
  std::size_t raw_moves = 0;
  std::size_t input_vertices = 0;
  bool infeasible = false;
};

/// One strategy-specific repartition at `clock`. `log` must contain the
/// records of [last_repart, clock) (extra records are filtered out by time).
RepartitionOutcome repartition(const ReplayConfig& cfg, const InteractionGraph& graph,
                               std::span<const TraceRecord> log, const Assignment& current,
                               std::uint64_t last_repart, std::uint64_t clock,
                               RefinementStats* stats = nullptr);

/// Replays a time-ordered trace. Windows are anchored at the first record's
/// timestamp; one sample is emitted per window up to the one holding the last
/// record. The `moves`/`repartitioned` fields of a sample describe the
/// repartition performed at the start of that window.
ReplayResult run_replay(std::span<const TraceRecord> trace, const ReplayConfig& cfg);

}  // namespace shardsim
