#pragma once

#include <cstdint>
#include <span>

#include "shardsim/address.hpp"
#include "shardsim/graph.hpp"
#include "shardsim/metrics.hpp"

namespace shardsim {

struct PartitionerConfig {
  ShardId k = 2;
  /// Allowed static imbalance: part weight <= (1 + eps) * ideal.
  double balance_tolerance = 0.05;
  std::uint64_t hash_seed = 0;
  /// Candidate-selection/exchange sweeps per KL repartition.
  unsigned kl_rounds = 1;
  std::uint64_t rng_seed = 1;

  /// Coarsening stops at max(coarsen_per_shard * k, coarsen_min) vertices or
  /// when a level shrinks the graph by less than min_shrink.
  std::size_t coarsen_per_shard = 30;
  std::size_t coarsen_min = 200;
  double min_shrink = 0.10;
  unsigned fm_pass_cap = 10;
  /// Independent graph-growing attempts on the coarsest graph.
  unsigned initial_tries = 8;
};

/// seeded_fnv1a(address bytes, hash_seed) mod k.
ShardId hash_partition(const Address& v, const PartitionerConfig& cfg);

/// Shard for a vertex seen for the first time: the shard holding most of
/// `tx_neighbors` (every occurrence counts, unassigned ids are ignored); ties
/// and the no-neighbor case go to the shard with the smallest load, then the
/// lowest index. `shard_load` has one entry per shard.
ShardId assign_new_vertex(const Assignment& a, std::span<const Address> tx_neighbors,
                          std::span<const Count> shard_load);

/// Same, using vertex counts from `a` as the load.
ShardId assign_new_vertex(const Assignment& a, std::span<const Address> tx_neighbors);

}  // namespace shardsim
