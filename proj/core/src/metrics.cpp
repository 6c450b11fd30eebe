#include "shardsim/metrics.hpp"

#include <algorithm>
#include <string>

namespace shardsim {

Assignment::Assignment(ShardId k) : k_(k) {
  if (k == 0) throw std::invalid_argument("shard count must be at least 1");
}

void Assignment::assign(const Address& id, ShardId shard) {
  if (shard >= k_) {
    throw std::out_of_range("shard " + std::to_string(shard) + " out of range for k=" + std::to_string(k_));
  }
  auto [it, inserted] = pos_.try_emplace(id, entries_.size());
  if (inserted) {
    entries_.push_back({id, shard});
  } else {
    entries_[it->second].shard = shard;
  }
}

std::optional<ShardId> Assignment::find(const Address& id) const {
  auto it = pos_.find(id);
  if (it == pos_.end()) return std::nullopt;
  return entries_[it->second].shard;
}

ShardId Assignment::shard_of(const Address& id) const {
  auto it = pos_.find(id);
  if (it == pos_.end()) throw std::out_of_range("vertex " + id.hex() + " is not assigned");
  return entries_[it->second].shard;
}

std::vector<Count> Assignment::shard_sizes() const {
  std::vector<Count> sizes(k_, 0);
  for (const auto& e : entries_) ++sizes[e.shard];
  return sizes;
}

bool operator==(const Assignment& a, const Assignment& b) {
  if (a.k_ != b.k_ || a.entries_.size() != b.entries_.size()) return false;
  for (const auto& e : a.entries_) {
    auto s = b.find(e.id);
    if (!s || *s != e.shard) return false;
  }
  return true;
}

std::vector<ShardId> resolve_shards(const InteractionGraph& graph, const Assignment& a) {
  std::vector<ShardId> shards;
  shards.reserve(graph.vertex_count());
  for (const auto& v : graph.vertices()) {
    auto s = a.find(v.id);
    if (!s) throw MetricsError("assignment does not cover vertex " + v.id.hex());
    shards.push_back(*s);
  }
  return shards;
}

namespace {

ShardId require(const Assignment& a, const Address& id) {
  auto s = a.find(id);
  if (!s) throw MetricsError("assignment does not cover vertex " + id.hex());
  return *s;
}

const WindowActivity& require_activity(const WindowActivity* activity) {
  if (activity == nullptr) throw MetricsError("dynamic metrics need window activity");
  return *activity;
}

double max_share(const std::vector<double>& per_shard, double total, ShardId k) {
  if (total <= 0.0) return 1.0;
  const double heaviest = *std::max_element(per_shard.begin(), per_shard.end());
  return heaviest * static_cast<double>(k) / total;
}

}  // namespace

double edge_cut(const InteractionGraph& graph, const Assignment& a, Weighting weighting,
                const WindowActivity* activity) {
  if (weighting == Weighting::Dynamic) {
    const auto& act = require_activity(activity);
    Count cut = 0;
    for (const auto& e : act.edges()) {
      if (require(a, e.from) != require(a, e.to)) cut += e.count;
    }
    const Count total = act.total_edge_activity();
    return total == 0 ? 0.0 : static_cast<double>(cut) / static_cast<double>(total);
  }

  if (graph.link_count() == 0) return 0.0;
  const auto shards = resolve_shards(graph, a);
  Count cut = 0;
  Count total = 0;
  for (const auto& l : graph.links()) {
    const Count w = weighting == Weighting::Static ? 1 : l.weight;
    total += w;
    if (shards[l.a] != shards[l.b]) cut += w;
  }
  return static_cast<double>(cut) / static_cast<double>(total);
}

double balance(const InteractionGraph& graph, const Assignment& a, Weighting weighting,
               const WindowActivity* activity) {
  const ShardId k = a.shard_count();
  std::vector<double> per_shard(k, 0.0);
  double total = 0.0;
  if (weighting == Weighting::Dynamic) {
    const auto& act = require_activity(activity);
    for (const auto& v : act.vertices()) {
      per_shard[require(a, v.id)] += static_cast<double>(v.count);
      total += static_cast<double>(v.count);
    }
    return max_share(per_shard, total, k);
  }

  const auto shards = resolve_shards(graph, a);
  for (std::size_t i = 0; i < shards.size(); ++i) {
    const double w = weighting == Weighting::Static ? 1.0 : static_cast<double>(graph.vertex(static_cast<VertexIndex>(i)).weight);
    per_shard[shards[i]] += w;
    total += w;
  }
  return max_share(per_shard, total, k);
}

double normalized_balance(double b, ShardId k) {
  if (k <= 1) return 0.0;
  return (b - 1.0) / static_cast<double>(k - 1);
}

std::size_t count_moves(const Assignment& before, const Assignment& after) {
  if (before.size() != after.size()) {
    throw MetricsError("assignments cover different vertex sets (" + std::to_string(before.size()) +
                       " vs " + std::to_string(after.size()) + " vertices)");
  }
  std::size_t moves = 0;
  for (const auto& e : before.entries()) {
    auto s = after.find(e.id);
    if (!s) throw MetricsError("vertex " + e.id.hex() + " missing from the new assignment");
    if (*s != e.shard) ++moves;
  }
  return moves;
}

}  // namespace shardsim
