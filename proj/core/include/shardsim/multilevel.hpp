#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shardsim/graph.hpp"
#include "shardsim/metrics.hpp"
#include "shardsim/partition.hpp"
#include "shardsim/rng.hpp"
#include "shardsim/weighted_graph.hpp"

namespace shardsim {

using Weight = WeightedGraph::Weight;
using Node = WeightedGraph::Node;

/// Counters from the refinement phase. `violations` counts FM passes after
/// which the cut weight was larger than before the pass; it must stay 0.
struct RefinementStats {
  std::size_t passes = 0;
  std::size_t moves = 0;
  std::size_t violations = 0;
  std::size_t levels = 0;

  RefinementStats& operator+=(const RefinementStats& o) {
    passes += o.passes;
    moves += o.moves;
    violations += o.violations;
    levels += o.levels;
    return *this;
  }
};

struct PartitionOutcome {
  std::vector<ShardId> part;  ///< shard per vertex
  Weight cut = 0;
  Weight max_part_weight = 0;
  /// Set when the result exceeds the balance bound (for instance because a
  /// single vertex is heavier than the bound).
  bool infeasible_balance = false;
  RefinementStats stats;
};

/// Integer part-weight bound: max(floor((1 + eps) * total / k), ceil(total / k)).
Weight part_weight_bound(Weight total, ShardId k, double eps);

/// Heavy-edge matching in random visit order. Returns mate[v] (v itself when
/// unmatched). Pairs whose combined weight exceeds `max_pair_weight` are not
/// formed.
std::vector<Node> heavy_edge_matching(const WeightedGraph& g, Rng& rng, Weight max_pair_weight);

struct CoarseLevel {
  WeightedGraph graph;
  std::vector<Node> fine_to_coarse;
};

/// Merges matched pairs. Vertex weights add up; edges inside a pair vanish;
/// parallel coarse edges merge.
CoarseLevel contract(const WeightedGraph& g, std::span<const Node> mate);

/// k-way greedy graph growing: parts 0..k-2 grow one at a time from random
/// seeds, absorbing the frontier vertex with the best connectivity gain,
/// until they reach total/k; the last part takes the rest.
std::vector<ShardId> grow_partition(const WeightedGraph& g, ShardId k, Weight bound, Rng& rng);

/// Moves vertices out of parts heavier than `bound`, preferring moves that
/// cost the least cut. Returns false if some part is still over the bound.
bool rebalance(const WeightedGraph& g, std::vector<ShardId>& part, ShardId k, Weight bound);

/// Boundary Fiduccia-Mattheyses passes restricted to positive-gain moves
/// that respect `bound`; stops after a pass without moves or `pass_cap` passes.
RefinementStats fm_refine(const WeightedGraph& g, std::vector<ShardId>& part, ShardId k,
                          Weight bound, unsigned pass_cap);

/// Coarsen, partition the coarsest graph, then project and refine level by
/// level. Deterministic in cfg.rng_seed.
PartitionOutcome multilevel_partition(const WeightedGraph& g, const PartitionerConfig& cfg);

/// Convenience wrapper over an interaction graph; every graph vertex appears
/// in the result. `stats`, when given, accumulates refinement counters.
Assignment multilevel_partition(const InteractionGraph& graph, const PartitionerConfig& cfg,
                                WeightedGraph::VertexWeights weights,
                                RefinementStats* stats = nullptr, bool* infeasible = nullptr);

}  // namespace shardsim
