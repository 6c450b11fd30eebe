#include "shardsim/replay.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <tuple>

#include "shardsim/kl.hpp"
#include "shardsim/rng.hpp"

namespace shardsim {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Hashing:
      return "hashing";
    case Strategy::KL:
      return "kl";
    case Strategy::MetisFull:
      return "metis-full";
    case Strategy::MetisWindow:
      return "metis-window";
    case Strategy::MetisThreshold:
      return "metis-threshold";
  }
  return "hashing";
}

bool parse_strategy(std::string_view text, Strategy& out) {
  for (const Strategy s : {Strategy::Hashing, Strategy::KL, Strategy::MetisFull, Strategy::MetisWindow,
                           Strategy::MetisThreshold}) {
    if (text == to_string(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

std::uint64_t parse_duration(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty duration");
  std::uint64_t unit = 1;
  switch (text.back()) {
    case 's':
      unit = 1;
      break;
    case 'm':
      unit = 60;
      break;
    case 'h':
      unit = kHour;
      break;
    case 'd':
      unit = kDay;
      break;
    case 'w':
      unit = 7 * kDay;
      break;
    default:
      unit = 0;
  }
  std::string_view digits = unit == 0 ? text : text.substr(0, text.size() - 1);
  if (unit == 0) unit = 1;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || value == 0) {
    throw std::invalid_argument("invalid duration '" + std::string(text) + "'");
  }
  return value * unit;
}

void ReplayConfig::validate() const {
  if (k == 0) throw std::invalid_argument("shard count must be at least 1");
  if (metric_window == 0) throw std::invalid_argument("metric window must be positive");
  if (repartition_interval < metric_window) {
    throw std::invalid_argument("repartition interval must not be shorter than the metric window");
  }
  if (partitioner.balance_tolerance < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  if (cut_threshold < 0.0 || balance_threshold < 0.0) {
    throw std::invalid_argument("thresholds must be non-negative");
  }
}

bool fire_trigger(Strategy strategy, std::uint64_t clock, std::uint64_t last_repart,
                  const MetricSample& last_sample, const ReplayConfig& cfg) {
  switch (strategy) {
    case Strategy::Hashing:
      return false;
    case Strategy::KL:
    case Strategy::MetisFull:
    case Strategy::MetisWindow:
      return clock >= last_repart && clock - last_repart >= cfg.repartition_interval;
    case Strategy::MetisThreshold:
      return last_sample.dynamic_edge_cut > cfg.cut_threshold ||
             last_sample.dynamic_balance > cfg.balance_threshold;
  }
  return false;
}

Assignment match_labels(const Assignment& old, const Assignment& fresh) {
  const ShardId k = fresh.shard_count();
  const ShardId old_k = old.shard_count();
  std::vector<std::vector<Count>> overlap(k, std::vector<Count>(old_k, 0));
  for (const auto& e : fresh.entries()) {
    if (auto s = old.find(e.id)) ++overlap[e.shard][*s];
  }
  std::vector<std::tuple<Count, ShardId, ShardId>> pairs;  // overlap, new, old
  for (ShardId j = 0; j < k; ++j) {
    for (ShardId i = 0; i < old_k; ++i) {
      if (overlap[j][i] > 0) pairs.emplace_back(overlap[j][i], j, i);
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });

  constexpr ShardId kNone = ~ShardId{0};
  std::vector<ShardId> rename(k, kNone);
  std::vector<bool> taken(std::max(k, old_k), false);
  for (const auto& [w, j, i] : pairs) {
    if (rename[j] != kNone || i >= k || taken[i]) continue;
    rename[j] = i;
    taken[i] = true;
  }
  ShardId next = 0;
  for (ShardId j = 0; j < k; ++j) {
    if (rename[j] != kNone) continue;
    while (taken[next]) ++next;
    rename[j] = next;
    taken[next] = true;
  }

  Assignment out(k);
  for (const auto& e : fresh.entries()) out.assign(e.id, rename[e.shard]);
  return out;
}

RepartitionOutcome repartition(const ReplayConfig& cfg, const InteractionGraph& graph,
                               std::span<const TraceRecord> log, const Assignment& current,
                               std::uint64_t last_repart, std::uint64_t clock, RefinementStats* stats) {
  RepartitionOutcome out{current, 0, 0, 0, false};
  PartitionerConfig pcfg = cfg.partitioner;
  pcfg.k = cfg.k;
  pcfg.rng_seed = mix_seed(cfg.partitioner.rng_seed, clock);

  switch (cfg.strategy) {
    case Strategy::Hashing:
      return out;

    case Strategy::KL: {
      const WindowActivity period = activity_between(log, last_repart, clock);
      out.input_vertices = period.vertices().size();
      for (unsigned round = 0; round < std::max(1u, pcfg.kl_rounds); ++round) {
        const auto candidates = kl_select_candidates(out.assignment, period);
        const auto matrix = kl_build_matrix(candidates, out.assignment, period, pcfg);
        out.assignment = kl_exchange(out.assignment, candidates, matrix, mix_seed(pcfg.rng_seed, round));
      }
      out.moves = out.raw_moves = count_moves(current, out.assignment);
      return out;
    }

    case Strategy::MetisFull: {
      out.input_vertices = graph.vertex_count();
      if (graph.empty()) return out;
      const auto fresh =
          multilevel_partition(graph, pcfg, WeightedGraph::VertexWeights::Unit, stats, &out.infeasible);
      out.raw_moves = count_moves(current, fresh);
      out.assignment = match_labels(current, fresh);
      out.moves = count_moves(current, out.assignment);
      return out;
    }

    case Strategy::MetisWindow:
    case Strategy::MetisThreshold: {
      const InteractionGraph sub = window_subgraph(log, last_repart, clock);
      out.input_vertices = sub.vertex_count();
      if (sub.empty()) return out;
      const auto fresh =
          multilevel_partition(sub, pcfg, WeightedGraph::VertexWeights::Activity, stats, &out.infeasible);
      const auto matched = match_labels(current, fresh);
      Assignment raw = current;
      for (const auto& e : fresh.entries()) raw.assign(e.id, e.shard);
      for (const auto& e : matched.entries()) out.assignment.assign(e.id, e.shard);
      out.raw_moves = count_moves(current, raw);
      out.moves = count_moves(current, out.assignment);
      return out;
    }
  }
  return out;
}

namespace {

class ReplayLoop {
public:
  ReplayLoop(std::span<const TraceRecord> trace, const ReplayConfig& cfg)
      : trace_(trace), cfg_(cfg), assignment_(cfg.k), load_(cfg.k, 0) {
    pcfg_ = cfg.partitioner;
    pcfg_.k = cfg.k;
  }

  ReplayResult run() {
    result_.final_assignment = Assignment(cfg_.k);
    if (trace_.empty()) return std::move(result_);

    const std::uint64_t t0 = trace_.front().timestamp;
    activity_ = WindowActivity(t0, cfg_.metric_window);
    last_repart_ = t0;

    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const auto& r = trace_[i];
      if (r.timestamp < activity_.window_start()) {
        throw std::invalid_argument("trace is not time-ordered at record " + std::to_string(i + 1));
      }
      while (r.timestamp >= activity_.window_end()) boundary(i);
      place(r);
      apply_record(graph_, activity_, r);
    }
    result_.samples.push_back(sample());
    result_.final_assignment = assignment_;
    return std::move(result_);
  }

private:
  void place(const TraceRecord& r) {
    if (r.tx_id != tx_id_ || tx_members_.empty()) {
      tx_id_ = r.tx_id;
      tx_members_.clear();
    }
    tx_members_.push_back(r.from);
    tx_members_.push_back(r.to);
    for (const Address* v : {&r.from, &r.to}) {
      if (assignment_.contains(*v)) continue;
      ShardId s = 0;
      if (cfg_.strategy == Strategy::Hashing || cfg_.strategy == Strategy::KL) {
        s = hash_partition(*v, pcfg_);
      } else {
        s = assign_new_vertex(assignment_, tx_members_, load_);
      }
      assignment_.assign(*v, s);
      ++load_[s];
    }
  }

  MetricSample sample() {
    MetricSample s;
    s.window_start = activity_.window_start();
    s.static_edge_cut = edge_cut(graph_, assignment_, Weighting::Static);
    s.static_balance = balance(graph_, assignment_, Weighting::Static);
    if (cfg_.weights == WeightMode::Window) {
      s.dynamic_edge_cut = edge_cut(graph_, assignment_, Weighting::Dynamic, &activity_);
      s.dynamic_balance = balance(graph_, assignment_, Weighting::Dynamic, &activity_);
    } else {
      s.dynamic_edge_cut = edge_cut(graph_, assignment_, Weighting::Cumulative);
      s.dynamic_balance = balance(graph_, assignment_, Weighting::Cumulative);
    }
    s.moves = pending_moves_;
    s.repartitioned = pending_repart_;
    pending_moves_ = 0;
    pending_repart_ = false;
    return s;
  }

  /// Closes the current window; `next` is the index of the first record
  /// not yet applied.
  void boundary(std::size_t next) {
    const MetricSample s = sample();
    result_.samples.push_back(s);
    auto closed = close_window(std::move(activity_));
    activity_ = std::move(closed.fresh);
    const std::uint64_t clock = activity_.window_start();

    if (!fire_trigger(cfg_.strategy, clock, last_repart_, s, cfg_)) return;

    const auto log = trace_.subspan(period_begin_, next - period_begin_);
    auto outcome = repartition(cfg_, graph_, log, assignment_, last_repart_, clock, &result_.refinement);
    if (cfg_.keep_history) result_.history.emplace_back(assignment_, outcome.assignment);
    if (outcome.infeasible) ++result_.infeasible_partitions;
    spdlog::debug("repartition at t={} ({}): {} input vertices, {} moves ({} before relabelling)", clock,
                  to_string(cfg_.strategy), outcome.input_vertices, outcome.moves, outcome.raw_moves);

    assignment_ = std::move(outcome.assignment);
    load_ = assignment_.shard_sizes();
    result_.total_moves += outcome.moves;
    result_.repartition_timestamps.push_back(clock);
    result_.repartitions.push_back({clock, outcome.moves, outcome.raw_moves, outcome.input_vertices});
    pending_moves_ = outcome.moves;
    pending_repart_ = true;
    last_repart_ = clock;
    period_begin_ = next;
  }

  std::span<const TraceRecord> trace_;
  const ReplayConfig& cfg_;
  PartitionerConfig pcfg_;
  InteractionGraph graph_;
  WindowActivity activity_;
  Assignment assignment_;
  std::vector<Count> load_;
  std::string tx_id_;
  std::vector<Address> tx_members_;
  std::uint64_t last_repart_ = 0;
  std::size_t period_begin_ = 0;
  std::size_t pending_moves_ = 0;
  bool pending_repart_ = false;
  ReplayResult result_;
};

}  // namespace

ReplayResult run_replay(std::span<const TraceRecord> trace, const ReplayConfig& cfg) {
  cfg.validate();
  return ReplayLoop(trace, cfg).run();
}

}  // namespace shardsim
