#include "shardsim/kl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "shardsim/rng.hpp"

namespace shardsim {

ProbabilityMatrix::ProbabilityMatrix(ShardId k) : k_(k), p_(static_cast<std::size_t>(k) * k, 0.0) {
  for (ShardId i = 0; i < k; ++i) (*this)(i, i) = 1.0;
}

bool ProbabilityMatrix::is_row_stochastic(double tol) const {
  for (ShardId i = 0; i < k_; ++i) {
    double sum = 0.0;
    for (ShardId j = 0; j < k_; ++j) {
      const double v = (*this)(i, j);
      if (v < -tol || v > 1.0 + tol) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

CandidateLists kl_select_candidates(const Assignment& a, const WindowActivity& activity) {
  const ShardId k = a.shard_count();
  CandidateLists out(k);

  // Undirected neighbor weights per active vertex, indexed like activity.vertices().
  std::unordered_map<Address, std::size_t> index;
  const auto verts = activity.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i].id, i);
  std::vector<std::vector<std::pair<std::size_t, Count>>> nbrs(verts.size());
  for (const auto& e : activity.edges()) {
    if (e.from == e.to) continue;
    const std::size_t u = index.at(e.from);
    const std::size_t v = index.at(e.to);
    nbrs[u].emplace_back(v, e.count);
    nbrs[v].emplace_back(u, e.count);
  }

  std::vector<ShardId> shard(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) shard[i] = a.shard_of(verts[i].id);

  std::vector<std::int64_t> conn(k, 0);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (nbrs[v].empty()) continue;
    std::fill(conn.begin(), conn.end(), 0);
    for (const auto& [u, w] : nbrs[v]) conn[shard[u]] += static_cast<std::int64_t>(w);
    const ShardId own = shard[v];
    ShardId best = own;
    for (ShardId j = 0; j < k; ++j) {
      if (j == own) continue;
      if (best == own || conn[j] > conn[best]) best = j;
    }
    if (best == own) continue;
    const std::int64_t gain = conn[best] - conn[own];
    if (gain > 0) out[own].push_back({verts[v].id, own, best, gain, verts[v].count});
  }
  return out;
}

ProbabilityMatrix kl_build_matrix(const CandidateLists& candidates, const Assignment& a,
                                  const WindowActivity& activity, const PartitionerConfig& cfg) {
  const ShardId k = a.shard_count();
  if (cfg.k != k) throw std::invalid_argument("config shard count differs from the assignment");
  if (candidates.size() != k) throw std::invalid_argument("candidate lists must have one entry per shard");

  std::vector<double> load(k, 0.0);
  for (const auto& v : activity.vertices()) load[a.shard_of(v.id)] += static_cast<double>(v.count);
  double mean = 0.0;
  for (const double w : load) mean += w;
  mean /= static_cast<double>(k);

  // demand[i][j]: candidate weight in shard i that wants shard j.
  std::vector<std::vector<double>> demand(k, std::vector<double>(k, 0.0));
  std::vector<double> cand_weight(k, 0.0);
  for (ShardId i = 0; i < k; ++i) {
    for (const auto& c : candidates[i]) {
      demand[i][c.target] += static_cast<double>(c.weight);
      cand_weight[i] += static_cast<double>(c.weight);
    }
  }

  std::vector<std::vector<double>> flow(k, std::vector<double>(k, 0.0));
  // Balance-neutral swaps.
  for (ShardId i = 0; i < k; ++i) {
    for (ShardId j = i + 1; j < k; ++j) {
      const double swap = std::min(demand[i][j], demand[j][i]);
      flow[i][j] = flow[j][i] = swap;
      demand[i][j] -= swap;
      demand[j][i] -= swap;
    }
  }

  // Net flow from overweight to underweight shards, scaled on both ends so
  // that senders do not drop below and receivers do not rise above the mean.
  std::vector<double> surplus(k);
  for (ShardId i = 0; i < k; ++i) surplus[i] = load[i] - mean;
  std::vector<double> send_scale(k, 0.0);
  for (ShardId i = 0; i < k; ++i) {
    if (surplus[i] <= 0.0) continue;
    double wanted = 0.0;
    for (ShardId j = 0; j < k; ++j) {
      if (surplus[j] < 0.0) wanted += demand[i][j];
    }
    if (wanted > 0.0) send_scale[i] = std::min(1.0, surplus[i] / wanted);
  }
  std::vector<double> inflow(k, 0.0);
  for (ShardId i = 0; i < k; ++i) {
    for (ShardId j = 0; j < k; ++j) {
      if (surplus[j] < 0.0) inflow[j] += send_scale[i] * demand[i][j];
    }
  }
  for (ShardId i = 0; i < k; ++i) {
    for (ShardId j = 0; j < k; ++j) {
      if (surplus[j] >= 0.0 || inflow[j] <= 0.0) continue;
      const double receive_scale = std::min(1.0, -surplus[j] / inflow[j]);
      flow[i][j] += send_scale[i] * receive_scale * demand[i][j];
    }
  }

  ProbabilityMatrix m(k);
  for (ShardId i = 0; i < k; ++i) {
    if (cand_weight[i] <= 0.0) continue;
    double moved = 0.0;
    for (ShardId j = 0; j < k; ++j) {
      if (j == i) continue;
      const double p = std::clamp(flow[i][j] / cand_weight[i], 0.0, 1.0);
      m(i, j) = p;
      moved += p;
    }
    m(i, i) = std::max(0.0, 1.0 - moved);
  }
  return m;
}

Assignment kl_exchange(const Assignment& a, const CandidateLists& candidates,
                       const ProbabilityMatrix& m, std::uint64_t rng_seed) {
  const ShardId k = a.shard_count();
  if (m.size() != k) throw std::invalid_argument("matrix size differs from the shard count");
  if (!m.is_row_stochastic(1e-6)) throw std::invalid_argument("matrix is not row-stochastic");

  Assignment next = a;
  Rng rng(rng_seed);
  for (ShardId i = 0; i < std::min<std::size_t>(k, candidates.size()); ++i) {
    double total = 0.0;
    std::vector<double> toward(k, 0.0);
    for (const auto& c : candidates[i]) {
      total += static_cast<double>(c.weight);
      toward[c.target] += static_cast<double>(c.weight);
    }
    for (const auto& c : candidates[i]) {
      // One draw per candidate keeps the stream aligned regardless of outcomes.
      const double u = rng.unit();
      if (c.target == i || toward[c.target] <= 0.0) continue;
      const double prob = std::min(1.0, m(i, c.target) * total / toward[c.target]);
      if (u < prob) next.assign(c.vertex, c.target);
    }
  }
  return next;
}

}  // namespace shardsim
