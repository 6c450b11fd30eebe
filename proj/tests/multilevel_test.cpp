#include <gtest/gtest.h>

#include <numeric>

#include "shardsim/graph.hpp"
#include "shardsim/multilevel.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace shardsim {
namespace {

using E = WeightedGraph::Edge;

WeightedGraph random_graph(Rng& rng, std::size_t n, std::size_t m, Weight max_w, Weight max_vw = 1) {
  std::vector<Weight> vw(n);
  for (auto& w : vw) w = 1 + static_cast<Weight>(rng.uniform(static_cast<std::uint64_t>(max_vw)));
  std::vector<E> edges;
  for (std::size_t i = 0; i < m; ++i) {
    edges.push_back({static_cast<Node>(rng.uniform(n)), static_cast<Node>(rng.uniform(n)),
                     1 + static_cast<Weight>(rng.uniform(static_cast<std::uint64_t>(max_w)))});
  }
  return WeightedGraph::from_edges(std::move(vw), edges);
}

testing::SmallGraph to_small(const WeightedGraph& g) {
  testing::SmallGraph s;
  s.n = g.vertex_count();
  s.vertex_weight.assign(g.vertex_weights().begin(), g.vertex_weights().end());
  for (Node u = 0; u < g.vertex_count(); ++u) {
    const auto nb = g.neighbors(u);
    const auto w = g.neighbor_weights(u);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (u < nb[i]) s.edges.push_back({u, nb[i], w[i]});
    }
  }
  return s;
}

std::vector<Weight> part_weights(const WeightedGraph& g, const std::vector<ShardId>& part, ShardId k) {
  std::vector<Weight> out(k, 0);
  for (Node v = 0; v < g.vertex_count(); ++v) out[part[v]] += g.vertex_weight(v);
  return out;
}

TEST(PartWeightBound, FloorAndCeil) {
  EXPECT_EQ(part_weight_bound(100, 2, 0.05), 52);
  EXPECT_EQ(part_weight_bound(11, 2, 0.05), 6);
  EXPECT_EQ(part_weight_bound(10, 1, 0.0), 10);
}

TEST(Multilevel, TwoDisjointCliques) {
  std::vector<E> edges;
  for (Node base : {0u, 5u}) {
    for (Node i = 0; i < 5; ++i) {
      for (Node j = i + 1; j < 5; ++j) edges.push_back({base + i, base + j, 1});
    }
  }
  const auto g = WeightedGraph::from_edges(std::vector<Weight>(10, 1), edges);
  PartitionerConfig cfg;
  cfg.k = 2;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.rng_seed = seed;
    const auto out = multilevel_partition(g, cfg);
    EXPECT_EQ(out.cut, 0);
    EXPECT_EQ(out.max_part_weight, 5);
    EXPECT_FALSE(out.infeasible_balance);
    EXPECT_EQ(out.stats.violations, 0u);
  }
}

TEST(Multilevel, SingleShard) {
  Rng rng(3);
  const auto g = random_graph(rng, 50, 120, 4);
  PartitionerConfig cfg;
  cfg.k = 1;
  const auto out = multilevel_partition(g, cfg);
  EXPECT_EQ(out.cut, 0);
  for (const auto s : out.part) EXPECT_EQ(s, 0u);
}

TEST(Multilevel, FewerVerticesThanShards) {
  const auto g = WeightedGraph::from_edges({1, 1}, std::vector<E>{{0, 1, 1}});
  PartitionerConfig cfg;
  cfg.k = 4;
  const auto out = multilevel_partition(g, cfg);
  ASSERT_EQ(out.part.size(), 2u);
  for (const auto s : out.part) EXPECT_LT(s, 4u);
}

TEST(Multilevel, HeavyVertexFlagsInfeasibility) {
  const auto g = WeightedGraph::from_edges({10, 1, 1}, std::vector<E>{{0, 1, 1}, {1, 2, 1}});
  PartitionerConfig cfg;
  cfg.k = 2;
  const auto out = multilevel_partition(g, cfg);
  EXPECT_TRUE(out.infeasible_balance);
  EXPECT_EQ(out.part.size(), 3u);
}

TEST(Multilevel, DeterministicForSeed) {
  Rng rng(8);
  const auto g = random_graph(rng, 600, 2400, 5);
  PartitionerConfig cfg;
  cfg.k = 4;
  cfg.rng_seed = 17;
  const auto a = multilevel_partition(g, cfg);
  const auto b = multilevel_partition(g, cfg);
  EXPECT_EQ(a.part, b.part);
  EXPECT_EQ(a.cut, b.cut);
}

TEST(Multilevel, RespectsBoundOnLargerGraphs) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(rng, 300 + rng.uniform(700), 3000, 6, 3);
    PartitionerConfig cfg;
    cfg.k = static_cast<ShardId>(2 + rng.uniform(7));
    cfg.rng_seed = rng.next();
    const auto out = multilevel_partition(g, cfg);
    const Weight bound = part_weight_bound(g.total_vertex_weight(), cfg.k, cfg.balance_tolerance);
    const auto pw = part_weights(g, out.part, cfg.k);
    EXPECT_FALSE(out.infeasible_balance);
    for (const auto w : pw) EXPECT_LE(w, bound);
    EXPECT_EQ(out.cut, cut_weight(g, out.part));
    EXPECT_EQ(out.stats.violations, 0u);
    EXPECT_GT(out.stats.levels, 0u);
  }
}

TEST(Matching, PairsAreSymmetricAndRespectCap) {
  Rng rng(4);
  const auto g = random_graph(rng, 200, 600, 5, 4);
  Rng mrng(9);
  const auto mate = heavy_edge_matching(g, mrng, 5);
  ASSERT_EQ(mate.size(), g.vertex_count());
  for (Node v = 0; v < g.vertex_count(); ++v) {
    EXPECT_EQ(mate[mate[v]], v);
    if (mate[v] != v) EXPECT_LE(g.vertex_weight(v) + g.vertex_weight(mate[v]), 5);
  }
}

// Contraction conserves vertex weight, drops exactly the intra-pair edge
// weight, and a projected coarse partition keeps its cut.
TEST(Contraction, ConservesWeightsAndCut) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_graph(rng, 20 + rng.uniform(200), 400, 7, 3);
    Rng mrng(rng.next());
    const auto mate = heavy_edge_matching(g, mrng, 1000);
    const auto level = contract(g, mate);
    EXPECT_EQ(level.graph.total_vertex_weight(), g.total_vertex_weight());
    Weight intra = 0;
    for (Node u = 0; u < g.vertex_count(); ++u) {
      const auto nb = g.neighbors(u);
      const auto w = g.neighbor_weights(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (u < nb[i] && level.fine_to_coarse[u] == level.fine_to_coarse[nb[i]]) intra += w[i];
      }
    }
    EXPECT_EQ(level.graph.total_edge_weight(), g.total_edge_weight() - intra);

    std::vector<ShardId> coarse(level.graph.vertex_count());
    for (auto& s : coarse) s = static_cast<ShardId>(rng.uniform(3));
    std::vector<ShardId> fine(g.vertex_count());
    for (Node v = 0; v < g.vertex_count(); ++v) fine[v] = coarse[level.fine_to_coarse[v]];
    EXPECT_EQ(cut_weight(level.graph, coarse), cut_weight(g, fine));
  }
}

TEST(FmRefine, NeverIncreasesCutAndKeepsBound) {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 30 + rng.uniform(300), 800, 9, 2);
    const ShardId k = static_cast<ShardId>(2 + rng.uniform(5));
    const Weight bound = part_weight_bound(g.total_vertex_weight(), k, 0.05);
    Rng grng(rng.next());
    auto part = grow_partition(g, k, bound, grng);
    rebalance(g, part, k, bound);
    const bool feasible_before = [&] {
      for (const auto w : part_weights(g, part, k)) {
        if (w > bound) return false;
      }
      return true;
    }();
    const Weight before = cut_weight(g, part);
    const auto stats = fm_refine(g, part, k, bound, 10);
    EXPECT_LE(cut_weight(g, part), before);
    EXPECT_EQ(stats.violations, 0u);
    EXPECT_LE(stats.passes, 10u);
    if (feasible_before) {
      for (const auto w : part_weights(g, part, k)) EXPECT_LE(w, bound);
    }
  }
}

TEST(Multilevel, CloseToExhaustiveOptimum) {
  Rng rng(2025);
  int within = 0;
  int total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.uniform(11);
    const auto g = random_graph(rng, n, n + rng.uniform(2 * n), 4);
    PartitionerConfig cfg;
    cfg.k = 2;
    cfg.rng_seed = rng.next();
    const Weight bound = part_weight_bound(g.total_vertex_weight(), 2, cfg.balance_tolerance);
    const auto opt = testing::oracle_min_bisection(to_small(g), bound);
    ASSERT_TRUE(opt.has_value());
    const auto out = multilevel_partition(g, cfg);
    EXPECT_EQ(out.cut, testing::oracle_cut(to_small(g), out.part));
    ++total;
    if (static_cast<double>(out.cut) <= 1.5 * static_cast<double>(*opt)) ++within;
  }
  EXPECT_GE(within, total * 9 / 10);
}

TEST(Multilevel, InteractionWrapperCoversAllVertices) {
  InteractionGraph ig;
  for (const auto& r : testing::contract_9703_trace()) ig.apply(r);
  PartitionerConfig cfg;
  cfg.k = 2;
  RefinementStats stats;
  bool infeasible = false;
  const auto a = multilevel_partition(ig, cfg, WeightedGraph::VertexWeights::Unit, &stats, &infeasible);
  EXPECT_EQ(a.size(), ig.vertex_count());
  EXPECT_EQ(a.shard_count(), 2u);
  EXPECT_EQ(stats.violations, 0u);
  EXPECT_FALSE(infeasible);
}

}  // namespace
}  // namespace shardsim
