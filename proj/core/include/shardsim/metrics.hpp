#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shardsim/address.hpp"
#include "shardsim/graph.hpp"

namespace shardsim {

/// Vertex -> shard map over k shards. Iteration follows insertion order.
class Assignment {
public:
  struct Entry {
    Address id;
    ShardId shard = 0;
  };

  explicit Assignment(ShardId k = 1);

  ShardId shard_count() const { return k_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Inserts or overwrites. Throws std::out_of_range when shard >= k.
  void assign(const Address& id, ShardId shard);
  bool contains(const Address& id) const { return pos_.contains(id); }
  std::optional<ShardId> find(const Address& id) const;
  /// Throws std::out_of_range for unknown vertices.
  ShardId shard_of(const Address& id) const;

  std::span<const Entry> entries() const { return entries_; }
  /// Number of vertices per shard.
  std::vector<Count> shard_sizes() const;

  friend bool operator==(const Assignment& a, const Assignment& b);

private:
  ShardId k_;
  std::vector<Entry> entries_;
  std::unordered_map<Address, std::size_t> pos_;
};

/// Which weights a metric uses: unit counts over the graph (Static), the
/// counts of one measurement window (Dynamic), or all-history interaction
/// counts stored in the graph (Cumulative).
enum class Weighting { Static, Dynamic, Cumulative };

class MetricsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Fraction of edges whose endpoints lie in different shards, each cut edge
/// counted once. Static mode counts undirected links (anti-parallel edges
/// merged, self-loops included in the denominator). Dynamic and Cumulative
/// weight each edge by its interaction count. Returns 0 when there are no
/// edges. Dynamic mode requires `activity`.
double edge_cut(const InteractionGraph& graph, const Assignment& a, Weighting weighting,
                const WindowActivity* activity = nullptr);

/// max_i(weight(p_i)) * k / total weight, where weight is the vertex count
/// (Static) or summed interaction counts (Dynamic/Cumulative). Returns 1 for
/// an empty graph or zero activity.
double balance(const InteractionGraph& graph, const Assignment& a, Weighting weighting,
               const WindowActivity* activity = nullptr);

/// (b - 1) / (k - 1); 0 when k == 1.
double normalized_balance(double b, ShardId k);

/// Vertices whose shard differs. Throws MetricsError when the two
/// assignments cover different vertex sets.
std::size_t count_moves(const Assignment& before, const Assignment& after);

/// Shard of every graph vertex, by vertex index. Throws MetricsError when a
/// vertex is unassigned.
std::vector<ShardId> resolve_shards(const InteractionGraph& graph, const Assignment& a);

struct MetricSample {
  std::uint64_t window_start = 0;
  double static_edge_cut = 0.0;
  double dynamic_edge_cut = 0.0;
  double static_balance = 1.0;
  double dynamic_balance = 1.0;
  std::size_t moves = 0;
  bool repartitioned = false;

  friend bool operator==(const MetricSample&, const MetricSample&) = default;
};

}  // namespace shardsim
