#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace shardsim {

class InteractionGraph;

/// Undirected weighted graph in compressed adjacency form; the input of the
/// partitioners. Every undirected edge appears in both endpoint lists, and
/// self-loops are dropped because they can never be cut.
class WeightedGraph {
public:
  using Node = std::uint32_t;
  using Weight = std::int64_t;

  struct Edge {
    Node u = 0;
    Node v = 0;
    Weight w = 0;
  };

  enum class VertexWeights { Unit, Activity };

  WeightedGraph() = default;

  /// Parallel edges are merged by summing weights; self-loops are dropped.
  static WeightedGraph from_edges(std::vector<Weight> vertex_weights, std::span<const Edge> edges);

  /// Vertex i of the result is vertex i of `graph`. Edge weights are the
  /// interaction counts of the merged undirected links; vertex weights are
  /// 1 (Unit) or the vertex's interaction count (Activity).
  static WeightedGraph from_interaction(const InteractionGraph& graph, VertexWeights mode);

  std::size_t vertex_count() const { return vertex_weights_.size(); }
  /// Undirected edges, self-loops excluded.
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  bool empty() const { return vertex_weights_.empty(); }

  std::span<const Node> neighbors(Node v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::span<const Weight> neighbor_weights(Node v) const {
    return {edge_weights_.data() + offsets_[v], edge_weights_.data() + offsets_[v + 1]};
  }
  Weight vertex_weight(Node v) const { return vertex_weights_[v]; }
  std::span<const Weight> vertex_weights() const { return vertex_weights_; }
  Weight total_vertex_weight() const { return total_vertex_weight_; }
  /// Each undirected edge counted once.
  Weight total_edge_weight() const { return total_edge_weight_; }
  Weight max_vertex_weight() const;

private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Node> adjacency_;
  std::vector<Weight> edge_weights_;
  std::vector<Weight> vertex_weights_;
  Weight total_vertex_weight_ = 0;
  Weight total_edge_weight_ = 0;
};

/// Sum of weights of edges whose endpoints lie in different parts.
WeightedGraph::Weight cut_weight(const WeightedGraph& g, std::span<const std::uint32_t> part);

/// METIS graph file format. Supports fmt flags 0/1/10/11 (and the 3-digit
/// 001/011 forms); multi-constraint weights and vertex sizes are rejected.
void write_metis(const WeightedGraph& g, std::ostream& out);
WeightedGraph read_metis(std::istream& in);

}  // namespace shardsim
