#include "shardsim/weighted_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "shardsim/graph.hpp"

namespace shardsim {

WeightedGraph WeightedGraph::from_edges(std::vector<Weight> vertex_weights,
                                        std::span<const Edge> edges) {
  WeightedGraph g;
  const std::size_t n = vertex_weights.size();
  g.vertex_weights_ = std::move(vertex_weights);
  for (const Weight w : g.vertex_weights_) g.total_vertex_weight_ += w;

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
    if (e.u == e.v) continue;
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + degree[v];
  std::vector<Node> adj(offsets[n]);
  std::vector<Weight> wts(offsets[n]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    adj[fill[e.u]] = e.v;
    wts[fill[e.u]++] = e.w;
    adj[fill[e.v]] = e.u;
    wts[fill[e.v]++] = e.w;
  }

  // Sort each list and merge parallel entries.
  g.offsets_.assign(n + 1, 0);
  g.adjacency_.reserve(adj.size());
  g.edge_weights_.reserve(adj.size());
  std::vector<std::pair<Node, Weight>> scratch;
  for (std::size_t v = 0; v < n; ++v) {
    scratch.clear();
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) scratch.emplace_back(adj[i], wts[i]);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t i = 0; i < scratch.size(); ++i) {
      if (i > 0 && scratch[i].first == scratch[i - 1].first) {
        g.edge_weights_.back() += scratch[i].second;
      } else {
        g.adjacency_.push_back(scratch[i].first);
        g.edge_weights_.push_back(scratch[i].second);
      }
    }
    g.offsets_[v + 1] = g.adjacency_.size();
  }
  Weight twice = 0;
  for (const Weight w : g.edge_weights_) twice += w;
  g.total_edge_weight_ = twice / 2;
  return g;
}

WeightedGraph WeightedGraph::from_interaction(const InteractionGraph& graph, VertexWeights mode) {
  std::vector<Weight> vw;
  vw.reserve(graph.vertex_count());
  for (const auto& v : graph.vertices()) {
    vw.push_back(mode == VertexWeights::Unit ? 1 : static_cast<Weight>(v.weight));
  }
  std::vector<Edge> edges;
  edges.reserve(graph.link_count());
  for (const auto& l : graph.links()) {
    if (l.a == l.b) continue;
    edges.push_back({l.a, l.b, static_cast<Weight>(l.weight)});
  }
  return from_edges(std::move(vw), edges);
}

WeightedGraph::Weight WeightedGraph::max_vertex_weight() const {
  Weight m = 0;
  for (const Weight w : vertex_weights_) m = std::max(m, w);
  return m;
}

WeightedGraph::Weight cut_weight(const WeightedGraph& g, std::span<const std::uint32_t> part) {
  WeightedGraph::Weight cut = 0;
  for (WeightedGraph::Node v = 0; v < g.vertex_count(); ++v) {
    const auto nbrs = g.neighbors(v);
    const auto wts = g.neighbor_weights(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] > v && part[nbrs[i]] != part[v]) cut += wts[i];
    }
  }
  return cut;
}

void write_metis(const WeightedGraph& g, std::ostream& out) {
  out << g.vertex_count() << ' ' << g.edge_count() << " 011\n";
  for (WeightedGraph::Node v = 0; v < g.vertex_count(); ++v) {
    out << g.vertex_weight(v);
    const auto nbrs = g.neighbors(v);
    const auto wts = g.neighbor_weights(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) out << ' ' << (nbrs[i] + 1) << ' ' << wts[i];
    out << '\n';
  }
}

WeightedGraph read_metis(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '%') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("metis: missing header");

  std::istringstream header(line);
  std::size_t n = 0;
  std::size_t m = 0;
  std::string fmt = "0";
  std::size_t ncon = 1;
  if (!(header >> n >> m)) throw std::runtime_error("metis: malformed header");
  header >> fmt;
  if (header >> ncon && ncon != 1) throw std::runtime_error("metis: multi-constraint weights unsupported");
  while (fmt.size() < 3) fmt.insert(fmt.begin(), '0');
  if (fmt.size() != 3 || fmt.find_first_not_of("01") != std::string::npos) {
    throw std::runtime_error("metis: bad fmt '" + fmt + "'");
  }
  if (fmt[0] == '1') throw std::runtime_error("metis: vertex sizes unsupported");
  const bool has_vw = fmt[1] == '1';
  const bool has_ew = fmt[2] == '1';

  std::vector<WeightedGraph::Weight> vw(n, 1);
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(m);
  std::size_t directed_entries = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!next_line()) throw std::runtime_error("metis: expected " + std::to_string(n) + " vertex lines");
    std::istringstream row(line);
    if (has_vw && !(row >> vw[v])) {
      throw std::runtime_error("metis: missing vertex weight on vertex " + std::to_string(v + 1));
    }
    std::size_t u = 0;
    while (row >> u) {
      WeightedGraph::Weight w = 1;
      if (has_ew && !(row >> w)) throw std::runtime_error("metis: missing edge weight");
      if (u == 0 || u > n) throw std::runtime_error("metis: neighbor id out of range");
      ++directed_entries;
      // Each undirected edge is listed from both sides; keep one copy.
      if (u - 1 > v) edges.push_back({static_cast<WeightedGraph::Node>(v), static_cast<WeightedGraph::Node>(u - 1), w});
    }
  }
  if (directed_entries != 2 * m) {
    throw std::runtime_error("metis: header declares " + std::to_string(m) + " edges, found " +
                             std::to_string(directed_entries) + " adjacency entries");
  }
  return WeightedGraph::from_edges(std::move(vw), edges);
}

}  // namespace shardsim
