#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "shardsim/address.hpp"
#include "shardsim/trace.hpp"

namespace shardsim {

using VertexIndex = std::uint32_t;
using Count = std::uint64_t;

struct VertexInfo {
  Address id;
  VertexKind kind = VertexKind::Account;
  Count weight = 0;  ///< records touching this vertex (a self-loop counts twice)
};

struct DirectedEdge {
  VertexIndex from = 0;
  VertexIndex to = 0;
  Count weight = 0;
};

/// Undirected view of the edge set: a->b and b->a collapse into one link with
/// summed weight. Endpoints are stored with a <= b; a == b is a self-loop.
struct Link {
  VertexIndex a = 0;
  VertexIndex b = 0;
  Count weight = 0;
};

/// Weighted directed interaction graph. Vertices are numbered densely in
/// order of first appearance and parallel interactions collapse into one
/// weighted edge. All iteration orders are insertion orders.
class InteractionGraph {
public:
  VertexIndex add_vertex(const Address& id, VertexKind kind);
  void add_interaction(const Address& from, VertexKind from_kind, const Address& to,
                       VertexKind to_kind, Count times = 1);
  void apply(const TraceRecord& r) { add_interaction(r.from, r.from_kind, r.to, r.to_kind); }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t link_count() const { return links_.size(); }
  bool empty() const { return vertices_.empty(); }

  std::span<const VertexInfo> vertices() const { return vertices_; }
  std::span<const DirectedEdge> edges() const { return edges_; }
  std::span<const Link> links() const { return links_; }
  const VertexInfo& vertex(VertexIndex v) const { return vertices_[v]; }

  std::optional<VertexIndex> find(const Address& id) const;
  Count edge_weight(const Address& from, const Address& to) const;
  /// Sum of weights of edges pointing at `id`.
  Count in_weight(const Address& id) const;
  Count total_edge_weight() const { return total_edge_weight_; }

private:
  static std::uint64_t key(VertexIndex a, VertexIndex b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::vector<VertexInfo> vertices_;
  std::unordered_map<Address, VertexIndex> index_;
  std::vector<DirectedEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_pos_;
  std::vector<Link> links_;
  std::unordered_map<std::uint64_t, std::size_t> link_pos_;
  Count total_edge_weight_ = 0;
};

/// Interaction counts inside one measurement window [start, start + len).
class WindowActivity {
public:
  struct EdgeCount {
    Address from;
    Address to;
    Count count = 0;
  };
  struct VertexCount {
    Address id;
    Count count = 0;
  };

  WindowActivity() = default;
  WindowActivity(std::uint64_t start, std::uint64_t len) : start_(start), len_(len) {}

  void record(const Address& from, const Address& to, Count times = 1);

  std::uint64_t window_start() const { return start_; }
  std::uint64_t window_len() const { return len_; }
  std::uint64_t window_end() const { return start_ + len_; }
  bool contains_time(std::uint64_t t) const { return t >= start_ && t - start_ < len_; }

  std::span<const EdgeCount> edges() const { return edges_; }
  std::span<const VertexCount> vertices() const { return vertices_; }
  Count edge(const Address& from, const Address& to) const;
  Count vertex(const Address& id) const;
  Count total_edge_activity() const { return total_edges_; }
  Count total_vertex_activity() const { return total_vertices_; }
  bool empty() const { return edges_.empty(); }

private:
  struct PairHash {
    std::size_t operator()(const std::pair<Address, Address>& p) const noexcept;
  };

  std::uint64_t start_ = 0;
  std::uint64_t len_ = 0;
  std::vector<EdgeCount> edges_;
  std::unordered_map<std::pair<Address, Address>, std::size_t, PairHash> edge_pos_;
  std::vector<VertexCount> vertices_;
  std::unordered_map<Address, std::size_t> vertex_pos_;
  Count total_edges_ = 0;
  Count total_vertices_ = 0;
};

/// Adds `r` to both the cumulative graph and the window counts. Throws
/// std::invalid_argument when the record falls outside the window.
void apply_record(InteractionGraph& graph, WindowActivity& activity, const TraceRecord& r);

struct ClosedWindow {
  WindowActivity finished;
  WindowActivity fresh;
};

/// Seals the current window and opens the next one, `window_len` later.
ClosedWindow close_window(WindowActivity activity);

/// Graph of exactly the records with timestamp in [from_t, to_t).
InteractionGraph window_subgraph(std::span<const TraceRecord> log, std::uint64_t from_t,
                                 std::uint64_t to_t);

/// Activity counts of the records with timestamp in [from_t, to_t).
WindowActivity activity_between(std::span<const TraceRecord> log, std::uint64_t from_t,
                                std::uint64_t to_t);

/// Writes the undirected weighted adjacency (METIS graph format, flags "011",
/// 1-based neighbor ids, self-loops omitted) plus a sidecar listing the
/// address of each vertex line in order. Vertex weights are interaction counts.
void export_adjacency(const InteractionGraph& graph, std::ostream& adjacency, std::ostream& sidecar);

}  // namespace shardsim
