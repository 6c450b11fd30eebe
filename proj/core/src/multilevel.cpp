#include "shardsim/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace shardsim {
namespace {

std::vector<Weight> part_weights(const WeightedGraph& g, std::span<const ShardId> part, ShardId k) {
  std::vector<Weight> pw(k, 0);
  for (Node v = 0; v < g.vertex_count(); ++v) pw[part[v]] += g.vertex_weight(v);
  return pw;
}

struct Move {
  Weight gain = 0;
  ShardId to = 0;
  bool valid = false;
};

/// Best single move of v among parts that keep weight within `bound`.
/// `conn` is scratch of size k and is left zeroed.
Move best_move(const WeightedGraph& g, std::span<const ShardId> part, std::span<const Weight> pw,
               Weight bound, Node v, std::vector<Weight>& conn) {
  const auto nbrs = g.neighbors(v);
  const auto wts = g.neighbor_weights(v);
  for (std::size_t i = 0; i < nbrs.size(); ++i) conn[part[nbrs[i]]] += wts[i];
  const ShardId own = part[v];
  const Weight vw = g.vertex_weight(v);
  Move best;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const ShardId q = part[nbrs[i]];
    if (q == own || pw[q] + vw > bound) continue;
    const Weight gain = conn[q] - conn[own];
    if (!best.valid || gain > best.gain || (gain == best.gain && (pw[q] < pw[best.to] || (pw[q] == pw[best.to] && q < best.to)))) {
      best = {gain, q, true};
    }
  }
  for (std::size_t i = 0; i < nbrs.size(); ++i) conn[part[nbrs[i]]] = 0;
  conn[own] = 0;
  return best;
}

bool is_boundary(const WeightedGraph& g, std::span<const ShardId> part, Node v) {
  for (const Node u : g.neighbors(v)) {
    if (part[u] != part[v]) return true;
  }
  return false;
}

}  // namespace

Weight part_weight_bound(Weight total, ShardId k, double eps) {
  if (k == 0) throw std::invalid_argument("shard count must be at least 1");
  const double ideal = static_cast<double>(total) / static_cast<double>(k);
  const auto relaxed = static_cast<Weight>(std::floor((1.0 + eps) * ideal + 1e-9));
  const Weight ceil_share = (total + static_cast<Weight>(k) - 1) / static_cast<Weight>(k);
  return std::max(relaxed, ceil_share);
}

std::vector<Node> heavy_edge_matching(const WeightedGraph& g, Rng& rng, Weight max_pair_weight) {
  const auto n = static_cast<Node>(g.vertex_count());
  std::vector<Node> mate(n, n);
  std::vector<Node> order(n);
  for (Node v = 0; v < n; ++v) order[v] = v;
  rng.shuffle(order);
  for (const Node v : order) {
    if (mate[v] != n) continue;
    const auto nbrs = g.neighbors(v);
    const auto wts = g.neighbor_weights(v);
    Node best = n;
    Weight best_w = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const Node u = nbrs[i];
      if (mate[u] != n || g.vertex_weight(u) + g.vertex_weight(v) > max_pair_weight) continue;
      if (best == n || wts[i] > best_w) {
        best = u;
        best_w = wts[i];
      }
    }
    if (best == n) {
      mate[v] = v;
    } else {
      mate[v] = best;
      mate[best] = v;
    }
  }
  return mate;
}

CoarseLevel contract(const WeightedGraph& g, std::span<const Node> mate) {
  const auto n = static_cast<Node>(g.vertex_count());
  CoarseLevel level;
  level.fine_to_coarse.assign(n, 0);
  Node c = 0;
  std::vector<Weight> vw;
  for (Node v = 0; v < n; ++v) {
    if (mate[v] < v) continue;  // already folded into its partner
    level.fine_to_coarse[v] = c;
    Weight w = g.vertex_weight(v);
    if (mate[v] != v) {
      level.fine_to_coarse[mate[v]] = c;
      w += g.vertex_weight(mate[v]);
    }
    vw.push_back(w);
    ++c;
  }
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(g.edge_count());
  for (Node v = 0; v < n; ++v) {
    const auto nbrs = g.neighbors(v);
    const auto wts = g.neighbor_weights(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] <= v) continue;
      const Node a = level.fine_to_coarse[v];
      const Node b = level.fine_to_coarse[nbrs[i]];
      if (a != b) edges.push_back({a, b, wts[i]});
    }
  }
  level.graph = WeightedGraph::from_edges(std::move(vw), edges);
  return level;
}

std::vector<ShardId> grow_partition(const WeightedGraph& g, ShardId k, Weight bound, Rng& rng) {
  const auto n = static_cast<Node>(g.vertex_count());
  const ShardId free = k;
  std::vector<ShardId> part(n, free);
  if (k == 1) {
    std::fill(part.begin(), part.end(), 0);
    return part;
  }

  std::vector<Node> pool(n);
  for (Node v = 0; v < n; ++v) pool[v] = v;
  Weight remaining = g.total_vertex_weight();

  std::vector<Weight> gain(n, 0);
  std::vector<std::uint32_t> rejected_in(n, free);
  using Entry = std::tuple<Weight, std::int64_t, Node>;  // gain, -id, vertex

  for (ShardId p = 0; p + 1 < k; ++p) {
    const double target = static_cast<double>(remaining) / static_cast<double>(k - p);
    // gain = connectivity to p minus connectivity to still-free vertices.
    for (Node v = 0; v < n; ++v) {
      if (part[v] != free) continue;
      Weight to_free = 0;
      const auto nbrs = g.neighbors(v);
      const auto wts = g.neighbor_weights(v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (part[nbrs[i]] == free) to_free += wts[i];
      }
      gain[v] = -to_free;
    }
    std::priority_queue<Entry> frontier;
    Weight pw = 0;

    while (static_cast<double>(pw) < target) {
      Node pick = n;
      while (!frontier.empty()) {
        auto [gv, neg_id, v] = frontier.top();
        frontier.pop();
        if (part[v] == free && rejected_in[v] != p && gv == gain[v]) {
          pick = v;
          break;
        }
      }
      if (pick == n) {
        // Frontier exhausted: reseed from a random free vertex.
        while (!pool.empty()) {
          const auto i = static_cast<std::size_t>(rng.uniform(pool.size()));
          const Node v = pool[i];
          if (part[v] == free && rejected_in[v] != p) {
            pick = v;
            break;
          }
          pool[i] = pool.back();
          pool.pop_back();
        }
        if (pick == n) break;
      }
      const Weight vw = g.vertex_weight(pick);
      if (pw + vw > bound) {
        rejected_in[pick] = p;
        continue;
      }
      if (pw > 0 && static_cast<double>(pw + vw) - target > target - static_cast<double>(pw)) break;
      part[pick] = p;
      pw += vw;
      const auto nbrs = g.neighbors(pick);
      const auto wts = g.neighbor_weights(pick);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const Node u = nbrs[i];
        if (part[u] != free) continue;
        gain[u] += 2 * wts[i];
        frontier.emplace(gain[u], -static_cast<std::int64_t>(u), u);
      }
    }
    remaining -= pw;
  }
  for (auto& s : part) {
    if (s == free) s = k - 1;
  }
  return part;
}

bool rebalance(const WeightedGraph& g, std::vector<ShardId>& part, ShardId k, Weight bound) {
  const auto n = static_cast<Node>(g.vertex_count());
  auto pw = part_weights(g, part, k);
  std::vector<Weight> conn(k, 0);
  using Entry = std::tuple<Weight, std::int64_t, Node, ShardId>;

  for (std::size_t round = 0; round <= n; ++round) {
    bool over = false;
    for (ShardId p = 0; p < k; ++p) over = over || pw[p] > bound;
    if (!over) return true;

    std::priority_queue<Entry> moves;
    for (Node v = 0; v < n; ++v) {
      const ShardId own = part[v];
      if (pw[own] <= bound) continue;
      const Weight vw = g.vertex_weight(v);
      const auto nbrs = g.neighbors(v);
      const auto wts = g.neighbor_weights(v);
      for (std::size_t i = 0; i < nbrs.size(); ++i) conn[part[nbrs[i]]] += wts[i];
      ShardId best = k;
      for (ShardId q = 0; q < k; ++q) {
        if (q == own || pw[q] + vw > bound) continue;
        if (best == k || conn[q] > conn[best] || (conn[q] == conn[best] && pw[q] < pw[best])) best = q;
      }
      if (best != k) moves.emplace(conn[best] - conn[own], -static_cast<std::int64_t>(v), v, best);
      std::fill(conn.begin(), conn.end(), 0);
    }

    std::size_t applied = 0;
    while (!moves.empty()) {
      auto [gain, neg_id, v, to] = moves.top();
      moves.pop();
      const ShardId from = part[v];
      const Weight vw = g.vertex_weight(v);
      if (pw[from] <= bound || pw[to] + vw > bound) continue;
      part[v] = to;
      pw[from] -= vw;
      pw[to] += vw;
      ++applied;
    }
    if (applied == 0) return false;
  }
  for (ShardId p = 0; p < k; ++p) {
    if (pw[p] > bound) return false;
  }
  return true;
}

RefinementStats fm_refine(const WeightedGraph& g, std::vector<ShardId>& part, ShardId k, Weight bound,
                          unsigned pass_cap) {
  RefinementStats stats;
  if (k < 2) return stats;
  const auto n = static_cast<Node>(g.vertex_count());
  auto pw = part_weights(g, part, k);
  std::vector<Weight> conn(k, 0);
  using Entry = std::tuple<Weight, std::int64_t, Node>;

  for (unsigned pass = 0; pass < pass_cap; ++pass) {
    const Weight before = cut_weight(g, part);
    std::vector<bool> locked(n, false);
    std::priority_queue<Entry> heap;
    for (Node v = 0; v < n; ++v) {
      if (!is_boundary(g, part, v)) continue;
      const Move m = best_move(g, part, pw, bound, v, conn);
      if (m.valid && m.gain > 0) heap.emplace(m.gain, -static_cast<std::int64_t>(v), v);
    }

    std::size_t moved = 0;
    while (!heap.empty()) {
      auto [gain, neg_id, v] = heap.top();
      heap.pop();
      if (locked[v]) continue;
      const Move m = best_move(g, part, pw, bound, v, conn);
      if (!m.valid || m.gain <= 0) continue;
      if (m.gain != gain) {
        heap.emplace(m.gain, neg_id, v);
        continue;
      }
      const Weight vw = g.vertex_weight(v);
      pw[part[v]] -= vw;
      pw[m.to] += vw;
      part[v] = m.to;
      locked[v] = true;
      ++moved;
      for (const Node u : g.neighbors(v)) {
        if (locked[u]) continue;
        const Move mu = best_move(g, part, pw, bound, u, conn);
        if (mu.valid && mu.gain > 0) heap.emplace(mu.gain, -static_cast<std::int64_t>(u), u);
      }
    }

    const Weight after = cut_weight(g, part);
    ++stats.passes;
    stats.moves += moved;
    if (after > before) ++stats.violations;
    if (moved == 0) break;
  }
  return stats;
}

PartitionOutcome multilevel_partition(const WeightedGraph& g, const PartitionerConfig& cfg) {
  if (cfg.k == 0) throw std::invalid_argument("shard count must be at least 1");
  PartitionOutcome out;
  const auto n = g.vertex_count();
  const ShardId k = cfg.k;
  out.part.assign(n, 0);
  if (n == 0) return out;
  const Weight total = g.total_vertex_weight();
  const Weight bound = part_weight_bound(total, k, cfg.balance_tolerance);
  if (k == 1) {
    out.max_part_weight = total;
    return out;
  }

  Rng rng(cfg.rng_seed);
  const std::size_t stop_at = std::max(cfg.coarsen_per_shard * k, cfg.coarsen_min);
  const Weight max_pair = std::max<Weight>(
      2, static_cast<Weight>(1.5 * static_cast<double>(total) / static_cast<double>(stop_at)));

  std::deque<CoarseLevel> levels;
  const WeightedGraph* current = &g;
  while (current->vertex_count() > stop_at) {
    const auto mate = heavy_edge_matching(*current, rng, max_pair);
    CoarseLevel level = contract(*current, mate);
    const auto before = static_cast<double>(current->vertex_count());
    const auto after = static_cast<double>(level.graph.vertex_count());
    if (after >= before) break;
    levels.push_back(std::move(level));
    current = &levels.back().graph;
    if (after > (1.0 - cfg.min_shrink) * before) break;
  }
  out.stats.levels = levels.size();

  // Initial partition: best of several growing attempts.
  std::vector<ShardId> best;
  std::tuple<bool, Weight, Weight> best_key{false, 0, 0};
  const unsigned tries = std::max(1u, cfg.initial_tries);
  for (unsigned t = 0; t < tries; ++t) {
    Rng trial(mix_seed(cfg.rng_seed, t + 1));
    auto part = grow_partition(*current, k, bound, trial);
    rebalance(*current, part, k, bound);
    out.stats += fm_refine(*current, part, k, bound, cfg.fm_pass_cap);
    const auto pw = part_weights(*current, part, k);
    const Weight heaviest = *std::max_element(pw.begin(), pw.end());
    const Weight cut = cut_weight(*current, part);
    // Prefer feasible, then lower cut, then lighter heaviest part.
    const std::tuple<bool, Weight, Weight> key{heaviest <= bound, -cut, -heaviest};
    if (best.empty() || key > best_key) {
      best = std::move(part);
      best_key = key;
    }
  }

  std::vector<ShardId> part = std::move(best);
  for (std::size_t i = levels.size(); i-- > 0;) {
    const WeightedGraph& fine = i == 0 ? g : levels[i - 1].graph;
    const auto& map = levels[i].fine_to_coarse;
    std::vector<ShardId> projected(fine.vertex_count());
    for (Node v = 0; v < fine.vertex_count(); ++v) projected[v] = part[map[v]];
    part = std::move(projected);
    rebalance(fine, part, k, bound);
    out.stats += fm_refine(fine, part, k, bound, cfg.fm_pass_cap);
  }

  const auto pw = part_weights(g, part, k);
  out.max_part_weight = *std::max_element(pw.begin(), pw.end());
  out.infeasible_balance = out.max_part_weight > bound;
  out.cut = cut_weight(g, part);
  out.part = std::move(part);
  return out;
}

Assignment multilevel_partition(const InteractionGraph& graph, const PartitionerConfig& cfg,
                                WeightedGraph::VertexWeights weights, RefinementStats* stats,
                                bool* infeasible) {
  const auto wg = WeightedGraph::from_interaction(graph, weights);
  const auto outcome = multilevel_partition(wg, cfg);
  if (stats != nullptr) *stats += outcome.stats;
  if (infeasible != nullptr) *infeasible = outcome.infeasible_balance;
  Assignment a(cfg.k);
  for (VertexIndex v = 0; v < graph.vertex_count(); ++v) a.assign(graph.vertex(v).id, outcome.part[v]);
  return a;
}

}  // namespace shardsim
