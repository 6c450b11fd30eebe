#include <gtest/gtest.h>

#include <sstream>

#include "shardsim/graph.hpp"
#include "shardsim/weighted_graph.hpp"
#include "support/fixtures.hpp"

namespace shardsim {
namespace {

using E = WeightedGraph::Edge;

TEST(WeightedGraph, MergesParallelEdgesAndDropsSelfLoops) {
  const std::vector<E> edges{{0, 1, 2}, {1, 0, 3}, {1, 1, 7}, {1, 2, 1}};
  const auto g = WeightedGraph::from_edges({1, 1, 1}, edges);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.total_edge_weight(), 6);
  ASSERT_EQ(g.neighbors(0).size(), 1u);
  EXPECT_EQ(g.neighbor_weights(0)[0], 5);
  EXPECT_EQ(g.neighbors(1).size(), 2u);
}

TEST(WeightedGraph, FromInteractionUsesLinkWeights) {
  InteractionGraph ig;
  for (const auto& r : testing::contract_9703_trace()) ig.apply(r);
  const auto unit = WeightedGraph::from_interaction(ig, WeightedGraph::VertexWeights::Unit);
  const auto act = WeightedGraph::from_interaction(ig, WeightedGraph::VertexWeights::Activity);
  EXPECT_EQ(unit.total_vertex_weight(), 7);
  EXPECT_EQ(act.total_vertex_weight(), 2 * 24);
  EXPECT_EQ(unit.total_edge_weight(), 24);
  EXPECT_EQ(act.max_vertex_weight(), 24);
}

TEST(WeightedGraph, CutWeight) {
  const std::vector<E> edges{{0, 1, 2}, {1, 2, 3}, {2, 3, 4}};
  const auto g = WeightedGraph::from_edges({1, 1, 1, 1}, edges);
  const std::vector<std::uint32_t> part{0, 0, 1, 1};
  EXPECT_EQ(cut_weight(g, part), 3);
}

TEST(Metis, RoundTripWithWeights) {
  const std::vector<E> edges{{0, 1, 2}, {1, 2, 3}, {0, 2, 1}, {3, 2, 5}};
  const auto g = WeightedGraph::from_edges({4, 1, 2, 3}, edges);
  std::stringstream ss;
  write_metis(g, ss);
  const auto back = read_metis(ss);
  ASSERT_EQ(back.vertex_count(), 4u);
  EXPECT_EQ(back.edge_count(), 4u);
  EXPECT_EQ(back.total_edge_weight(), g.total_edge_weight());
  for (WeightedGraph::Node v = 0; v < 4; ++v) EXPECT_EQ(back.vertex_weight(v), g.vertex_weight(v));
}

TEST(Metis, ReadsUnweightedAndComments) {
  std::istringstream in("% a triangle\n3 3\n2 3\n1 3\n1 2\n");
  const auto g = read_metis(in);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.total_edge_weight(), 3);
  EXPECT_EQ(g.total_vertex_weight(), 3);
}

TEST(Metis, RejectsBadInput) {
  std::istringstream wrong_count("3 2\n2 3\n1 3\n1 2\n");
  EXPECT_THROW(read_metis(wrong_count), std::runtime_error);
  std::istringstream out_of_range("2 1\n3\n1\n");
  EXPECT_THROW(read_metis(out_of_range), std::runtime_error);
  std::istringstream sizes("2 1 100\n5 2\n5 1\n");
  EXPECT_THROW(read_metis(sizes), std::runtime_error);
}

TEST(Metis, ReadsInteractionExport) {
  InteractionGraph ig;
  for (const auto& r : testing::contract_9703_trace()) ig.apply(r);
  std::stringstream adj;
  std::stringstream side;
  export_adjacency(ig, adj, side);
  const auto g = read_metis(adj);
  const auto direct = WeightedGraph::from_interaction(ig, WeightedGraph::VertexWeights::Activity);
  EXPECT_EQ(g.vertex_count(), direct.vertex_count());
  EXPECT_EQ(g.total_edge_weight(), direct.total_edge_weight());
  EXPECT_EQ(g.total_vertex_weight(), direct.total_vertex_weight());
}

}  // namespace
}  // namespace shardsim
