#include "shardsim/partition.hpp"

#include <stdexcept>
#include <vector>

#include "shardsim/hash.hpp"

namespace shardsim {

ShardId hash_partition(const Address& v, const PartitionerConfig& cfg) {
  if (cfg.k == 0) throw std::invalid_argument("shard count must be at least 1");
  return static_cast<ShardId>(address_hash(v, cfg.hash_seed) % cfg.k);
}

ShardId assign_new_vertex(const Assignment& a, std::span<const Address> tx_neighbors,
                          std::span<const Count> shard_load) {
  const ShardId k = a.shard_count();
  if (shard_load.size() != k) throw std::invalid_argument("shard_load size differs from k");

  std::vector<Count> votes(k, 0);
  for (const auto& n : tx_neighbors) {
    if (auto s = a.find(n)) ++votes[*s];
  }
  ShardId best = 0;
  for (ShardId s = 1; s < k; ++s) {
    if (votes[s] > votes[best] || (votes[s] == votes[best] && shard_load[s] < shard_load[best])) {
      best = s;
    }
  }
  return best;
}

ShardId assign_new_vertex(const Assignment& a, std::span<const Address> tx_neighbors) {
  const auto load = a.shard_sizes();
  return assign_new_vertex(a, tx_neighbors, load);
}

}  // namespace shardsim
