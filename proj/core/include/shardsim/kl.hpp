#pragma once

#include <cstdint>
#include <vector>

#include "shardsim/graph.hpp"
#include "shardsim/metrics.hpp"
#include "shardsim/partition.hpp"

namespace shardsim {

/// A vertex that would lower the weighted cut by moving to `target`.
struct KlCandidate {
  Address vertex;
  ShardId from = 0;
  ShardId target = 0;
  std::int64_t gain = 0;  ///< activity toward target minus activity inside own shard
  Count weight = 0;       ///< the vertex's activity in the period

  friend bool operator==(const KlCandidate&, const KlCandidate&) = default;
};

/// Candidates grouped by current shard; index i holds shard i's list.
using CandidateLists = std::vector<std::vector<KlCandidate>>;

/// Row-stochastic k x k matrix; p(i, j) is the probability mass shard i
/// sends to shard j, with the unmoved remainder on the diagonal.
class ProbabilityMatrix {
public:
  explicit ProbabilityMatrix(ShardId k = 1);
  static ProbabilityMatrix identity(ShardId k) { return ProbabilityMatrix(k); }

  ShardId size() const { return k_; }
  double& operator()(ShardId i, ShardId j) { return p_[static_cast<std::size_t>(i) * k_ + j]; }
  double operator()(ShardId i, ShardId j) const { return p_[static_cast<std::size_t>(i) * k_ + j]; }
  bool is_row_stochastic(double tol = 1e-9) const;

private:
  ShardId k_;
  std::vector<double> p_;
};

/// Every vertex active in the period whose best external shard beats its
/// internal connectivity. Self-loops are ignored; ties pick the lowest shard.
CandidateLists kl_select_candidates(const Assignment& a, const WindowActivity& activity);

/// Oracle step. Shards are weighed by period activity. Opposite candidate
/// demand between two shards is first paired up as a balance-neutral swap;
/// the rest of each overweight shard's demand toward underweight shards is
/// scaled down so that no shard overshoots the mean. Then
/// p(i, j) = flow(i, j) / (activity weight of shard i's candidates).
ProbabilityMatrix kl_build_matrix(const CandidateLists& candidates, const Assignment& a,
                                  const WindowActivity& activity, const PartitionerConfig& cfg);

/// Moves each candidate of shard i toward its target t with probability
/// min(1, p(i, t) * W_i / W_it), where W_i is the weight of all of shard i's
/// candidates and W_it of those targeting t, so the expected weight moved
/// from i to t is p(i, t) * W_i. Non-candidates never move.
Assignment kl_exchange(const Assignment& a, const CandidateLists& candidates,
                       const ProbabilityMatrix& m, std::uint64_t rng_seed);

}  // namespace shardsim
