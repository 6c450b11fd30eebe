#include "shardsim/graph.hpp"

#include <ostream>
#include <stdexcept>

#include "shardsim/hash.hpp"
#include "shardsim/weighted_graph.hpp"

namespace shardsim {

VertexIndex InteractionGraph::add_vertex(const Address& id, VertexKind kind) {
  auto [it, inserted] = index_.try_emplace(id, static_cast<VertexIndex>(vertices_.size()));
  if (inserted) vertices_.push_back({id, kind, 0});
  return it->second;
}

void InteractionGraph::add_interaction(const Address& from, VertexKind from_kind, const Address& to,
                                       VertexKind to_kind, Count times) {
  const VertexIndex u = add_vertex(from, from_kind);
  const VertexIndex v = add_vertex(to, to_kind);
  vertices_[u].weight += times;
  vertices_[v].weight += times;

  auto [eit, new_edge] = edge_pos_.try_emplace(key(u, v), edges_.size());
  if (new_edge) edges_.push_back({u, v, 0});
  edges_[eit->second].weight += times;

  const VertexIndex a = std::min(u, v);
  const VertexIndex b = std::max(u, v);
  auto [lit, new_link] = link_pos_.try_emplace(key(a, b), links_.size());
  if (new_link) links_.push_back({a, b, 0});
  links_[lit->second].weight += times;

  total_edge_weight_ += times;
}

std::optional<VertexIndex> InteractionGraph::find(const Address& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Count InteractionGraph::edge_weight(const Address& from, const Address& to) const {
  const auto u = find(from);
  const auto v = find(to);
  if (!u || !v) return 0;
  auto it = edge_pos_.find(key(*u, *v));
  return it == edge_pos_.end() ? 0 : edges_[it->second].weight;
}

Count InteractionGraph::in_weight(const Address& id) const {
  const auto v = find(id);
  if (!v) return 0;
  Count sum = 0;
  for (const auto& e : edges_) {
    if (e.to == *v) sum += e.weight;
  }
  return sum;
}

std::size_t WindowActivity::PairHash::operator()(const std::pair<Address, Address>& p) const noexcept {
  return static_cast<std::size_t>(address_hash(p.second, address_hash(p.first, 0)));
}

void WindowActivity::record(const Address& from, const Address& to, Count times) {
  auto [eit, new_edge] = edge_pos_.try_emplace({from, to}, edges_.size());
  if (new_edge) edges_.push_back({from, to, 0});
  edges_[eit->second].count += times;

  for (const Address* v : {&from, &to}) {
    auto [vit, new_vertex] = vertex_pos_.try_emplace(*v, vertices_.size());
    if (new_vertex) vertices_.push_back({*v, 0});
    vertices_[vit->second].count += times;
  }
  total_edges_ += times;
  total_vertices_ += 2 * times;
}

Count WindowActivity::edge(const Address& from, const Address& to) const {
  auto it = edge_pos_.find({from, to});
  return it == edge_pos_.end() ? 0 : edges_[it->second].count;
}

Count WindowActivity::vertex(const Address& id) const {
  auto it = vertex_pos_.find(id);
  return it == vertex_pos_.end() ? 0 : vertices_[it->second].count;
}

void apply_record(InteractionGraph& graph, WindowActivity& activity, const TraceRecord& r) {
  if (!activity.contains_time(r.timestamp)) {
    throw std::invalid_argument("record at t=" + std::to_string(r.timestamp) +
                                " is outside the current window");
  }
  graph.apply(r);
  activity.record(r.from, r.to);
}

ClosedWindow close_window(WindowActivity activity) {
  WindowActivity fresh(activity.window_end(), activity.window_len());
  return {std::move(activity), std::move(fresh)};
}

InteractionGraph window_subgraph(std::span<const TraceRecord> log, std::uint64_t from_t,
                                 std::uint64_t to_t) {
  InteractionGraph g;
  for (const auto& r : log) {
    if (r.timestamp >= from_t && r.timestamp < to_t) g.apply(r);
  }
  return g;
}

WindowActivity activity_between(std::span<const TraceRecord> log, std::uint64_t from_t,
                                std::uint64_t to_t) {
  WindowActivity a(from_t, to_t - from_t);
  for (const auto& r : log) {
    if (r.timestamp >= from_t && r.timestamp < to_t) a.record(r.from, r.to);
  }
  return a;
}

void export_adjacency(const InteractionGraph& graph, std::ostream& adjacency, std::ostream& sidecar) {
  write_metis(WeightedGraph::from_interaction(graph, WeightedGraph::VertexWeights::Activity), adjacency);
  for (const auto& v : graph.vertices()) sidecar << v.id.hex() << '\n';
}

}  // namespace shardsim
