#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace shardsim::testing {

double oracle_static_edge_cut(const std::vector<TraceRecord>& records, const ShardMap& shard) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& r : records) {
    std::string a = r.from.hex();
    std::string b = r.to.hex();
    if (b < a) std::swap(a, b);
    pairs.emplace(a, b);
  }
  if (pairs.empty()) return 0.0;
  std::size_t cut = 0;
  for (const auto& [a, b] : pairs) {
    if (shard.at(a) != shard.at(b)) ++cut;
  }
  return static_cast<double>(cut) / static_cast<double>(pairs.size());
}

double oracle_dynamic_edge_cut(const std::vector<TraceRecord>& records, const ShardMap& shard) {
  if (records.empty()) return 0.0;
  std::size_t cut = 0;
  for (const auto& r : records) {
    if (shard.at(r.from.hex()) != shard.at(r.to.hex())) ++cut;
  }
  return static_cast<double>(cut) / static_cast<double>(records.size());
}

double oracle_static_balance(const std::vector<TraceRecord>& records, const ShardMap& shard, std::uint32_t k) {
  std::vector<std::set<std::string>> parts(k);
  std::set<std::string> all;
  for (const auto& r : records) {
    for (const auto& v : {r.from.hex(), r.to.hex()}) {
      parts[shard.at(v)].insert(v);
      all.insert(v);
    }
  }
  if (all.empty()) return 1.0;
  std::size_t biggest = 0;
  for (const auto& p : parts) biggest = std::max(biggest, p.size());
  return static_cast<double>(biggest) * k / static_cast<double>(all.size());
}

double oracle_dynamic_balance(const std::vector<TraceRecord>& records, const ShardMap& shard, std::uint32_t k) {
  std::vector<std::size_t> load(k, 0);
  for (const auto& r : records) {
    ++load[shard.at(r.from.hex())];
    ++load[shard.at(r.to.hex())];
  }
  const std::size_t total = 2 * records.size();
  if (total == 0) return 1.0;
  return static_cast<double>(*std::max_element(load.begin(), load.end())) * k / static_cast<double>(total);
}

std::int64_t oracle_cut(const SmallGraph& g, const std::vector<std::uint32_t>& part) {
  std::int64_t cut = 0;
  for (const auto& e : g.edges) {
    if (part[e.u] != part[e.v]) cut += e.w;
  }
  return cut;
}

std::optional<std::int64_t> oracle_min_bisection(const SmallGraph& g, std::int64_t bound) {
  std::optional<std::int64_t> best;
  if (g.n == 0) return 0;
  const std::uint64_t limit = 1ULL << (g.n - 1);
  std::vector<std::uint32_t> part(g.n);
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    std::int64_t w1 = 0;
    std::int64_t w0 = 0;
    for (std::size_t v = 0; v < g.n; ++v) {
      // Vertex n-1 always sits on side 0.
      part[v] = v + 1 < g.n ? static_cast<std::uint32_t>((mask >> v) & 1U) : 0U;
      (part[v] ? w1 : w0) += g.vertex_weight[v];
    }
    if (w0 > bound || w1 > bound) continue;
    const std::int64_t cut = oracle_cut(g, part);
    if (!best || cut < *best) best = cut;
  }
  return best;
}

double oracle_quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const long double rank = 1.0L + static_cast<long double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const long double frac = rank - static_cast<long double>(lo);
  const long double a = values[lo - 1];
  const long double b = values[hi - 1];
  return static_cast<double>(a + frac * (b - a));
}

double harmonic(std::size_t n, double s) {
  double h = 0.0;
  for (std::size_t r = n; r >= 1; --r) h += std::pow(static_cast<double>(r), -s);
  return h;
}

}  // namespace shardsim::testing
