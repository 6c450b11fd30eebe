#include "shardsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "shardsim/rng.hpp"

namespace shardsim {
namespace {

/// Draws an item with probability proportional to its weight.
class WeightedPicker {
public:
  WeightedPicker() = default;
  WeightedPicker(std::vector<std::uint32_t> items, const std::vector<double>& weight_of)
      : items_(std::move(items)) {
    cumulative_.reserve(items_.size());
    double sum = 0.0;
    for (const auto v : items_) {
      sum += weight_of[v];
      cumulative_.push_back(sum);
    }
  }

  bool empty() const { return items_.empty(); }

  std::uint32_t pick(Rng& rng) const {
    const double u = rng.unit() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return items_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

private:
  std::vector<std::uint32_t> items_;
  std::vector<double> cumulative_;
};

Address make_address(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (index * 0xd1b54a32d192ed03ULL);
  const std::uint64_t a = Rng::splitmix(state);
  const std::uint64_t b = Rng::splitmix(state);
  Address::Bytes bytes{};
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<std::uint8_t>(a >> (56 - 8 * i));
    bytes[8 + i] = static_cast<std::uint8_t>(b >> (56 - 8 * i));
  }
  for (int i = 0; i < 4; ++i) bytes[16 + i] = static_cast<std::uint8_t>(index >> (24 - 8 * i));
  return Address(bytes);
}

struct Event {
  std::uint64_t timestamp;
  std::uint32_t from;
  std::uint32_t to;
  std::uint64_t tx;
};

}  // namespace

void WorkloadSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid workload: ") + what);
  };
  require(communities >= 1, "communities must be >= 1");
  require(vertices >= communities && vertices >= 2, "need at least max(2, communities) vertices");
  require(vertices < (1ULL << 31), "too many vertices");
  require(inter_probability >= 0.0 && inter_probability <= 1.0, "inter_probability outside [0, 1]");
  require(zipf_exponent >= 0.0, "zipf_exponent must be >= 0");
  require(duration > 0, "duration must be positive");
  require(records_per_hour > 0.0, "records_per_hour must be positive");
  require(contract_fraction >= 0.0 && contract_fraction < 1.0, "contract_fraction outside [0, 1)");
  require(internal_call_probability >= 0.0 && internal_call_probability <= 1.0,
          "internal_call_probability outside [0, 1]");
  require(block_interval > 0, "block_interval must be positive");
  require(rewire_at <= 1.0, "rewire_at must be <= 1");
  require(rewire_fraction >= 0.0 && rewire_fraction <= 1.0, "rewire_fraction outside [0, 1]");
  require(dummy_at >= 0.0 && dummy_at <= 1.0, "dummy_at outside [0, 1]");
  require(dummy_vertices == 0 || dummy_span > 0, "dummy_span must be positive");
}

WorkloadSpec parse_workload_json(std::string_view json) {
  const auto obj = nlohmann::json::parse(json);
  if (!obj.is_object()) throw std::invalid_argument("workload spec must be a JSON object");
  WorkloadSpec spec;
  auto duration_of = [](const nlohmann::json& v) -> std::uint64_t {
    if (v.is_string()) return parse_duration(v.get<std::string>());
    return v.get<std::uint64_t>();
  };
  for (const auto& [key, v] : obj.items()) {
    if (key == "vertices") spec.vertices = v.get<std::size_t>();
    else if (key == "communities") spec.communities = v.get<std::size_t>();
    else if (key == "inter_probability") spec.inter_probability = v.get<double>();
    else if (key == "zipf_exponent") spec.zipf_exponent = v.get<double>();
    else if (key == "duration") spec.duration = duration_of(v);
    else if (key == "records_per_hour") spec.records_per_hour = v.get<double>();
    else if (key == "contract_fraction") spec.contract_fraction = v.get<double>();
    else if (key == "internal_call_probability") spec.internal_call_probability = v.get<double>();
    else if (key == "start_time") spec.start_time = v.get<std::uint64_t>();
    else if (key == "block_interval") spec.block_interval = duration_of(v);
    else if (key == "rewire_at") spec.rewire_at = v.get<double>();
    else if (key == "rewire_fraction") spec.rewire_fraction = v.get<double>();
    else if (key == "dummy_vertices") spec.dummy_vertices = v.get<std::size_t>();
    else if (key == "dummy_at") spec.dummy_at = v.get<double>();
    else if (key == "dummy_span") spec.dummy_span = duration_of(v);
    else throw std::invalid_argument("unknown workload key '" + key + "'");
  }
  spec.validate();
  return spec;
}

SyntheticTrace synth_trace(const WorkloadSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const auto n = static_cast<std::uint32_t>(spec.vertices);
  const auto c = static_cast<std::uint32_t>(spec.communities);

  SyntheticTrace out;
  const std::uint64_t address_seed = mix_seed(seed, 0xadd7e55);
  const std::size_t total_vertices = n + (spec.dummy_vertices > 0 ? spec.dummy_vertices + 1 : 0);
  out.addresses.reserve(total_vertices);
  for (std::uint64_t i = 0; i < total_vertices; ++i) out.addresses.push_back(make_address(address_seed, i));

  // Zipf activity with ranks scattered over vertices.
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t v = 0; v < n; ++v) rank[v] = v;
  rng.shuffle(rank);
  std::vector<double> weight(n);
  for (std::uint32_t v = 0; v < n; ++v) weight[v] = std::pow(static_cast<double>(rank[v]) + 1.0, -spec.zipf_exponent);

  std::vector<VertexKind> kind(total_vertices, VertexKind::Account);
  std::vector<std::uint32_t> accounts;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (rng.unit() < spec.contract_fraction) {
      kind[v] = VertexKind::Contract;
    } else {
      accounts.push_back(v);
    }
  }
  if (accounts.empty()) {
    kind[0] = VertexKind::Account;
    accounts.push_back(0);
  }

  std::vector<std::uint32_t> community(n);
  for (std::uint32_t v = 0; v < n; ++v) community[v] = v % c;
  out.community.assign(community.begin(), community.end());

  auto build_members = [&] {
    std::vector<std::vector<std::uint32_t>> members(c);
    for (std::uint32_t v = 0; v < n; ++v) members[community[v]].push_back(v);
    std::vector<WeightedPicker> pickers;
    pickers.reserve(c);
    for (auto& m : members) pickers.emplace_back(std::move(m), weight);
    return pickers;
  };
  std::vector<WeightedPicker> in_community = build_members();
  const WeightedPicker senders(accounts, weight);

  const double hours = static_cast<double>(spec.duration) / static_cast<double>(kHour);
  const auto transactions = static_cast<std::uint64_t>(std::floor(hours * spec.records_per_hour));
  const bool rewire = spec.rewire_at >= 0.0;
  const auto rewire_time =
      spec.start_time + static_cast<std::uint64_t>(spec.rewire_at * static_cast<double>(spec.duration));
  bool rewired = false;

  auto draw_target = [&](std::uint32_t from) {
    std::uint32_t target_comm = community[from];
    if (c > 1 && rng.unit() < spec.inter_probability) {
      target_comm = static_cast<std::uint32_t>((target_comm + 1 + rng.uniform(c - 1)) % c);
    }
    if (in_community[target_comm].empty()) target_comm = community[from];
    return in_community[target_comm].pick(rng);
  };

  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(transactions * 1.5) + spec.dummy_vertices);
  for (std::uint64_t t = 0; t < transactions; ++t) {
    const std::uint64_t ts = spec.start_time + (t * spec.duration) / std::max<std::uint64_t>(transactions, 1);
    if (rewire && !rewired && ts >= rewire_time) {
      for (std::uint32_t comm = 0; comm < c; ++comm) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t v = 0; v < n; ++v) {
          if (community[v] == comm && out.community[v] == comm) members.push_back(v);
        }
        rng.shuffle(members);
        const auto moving = static_cast<std::size_t>(std::llround(spec.rewire_fraction * static_cast<double>(members.size())));
        for (std::size_t i = 0; i < moving; ++i) community[members[i]] = (comm + 1) % c;
      }
      in_community = build_members();
      rewired = true;
    }
    const std::uint32_t from = senders.pick(rng);
    const std::uint32_t to = draw_target(from);
    events.push_back({ts, from, to, t});
    if (kind[to] == VertexKind::Contract && rng.unit() < spec.internal_call_probability) {
      events.push_back({ts, to, draw_target(to), t});
    }
  }
  out.community_after.assign(community.begin(), community.end());

  if (spec.dummy_vertices > 0) {
    const std::uint32_t attacker = n;
    out.community.push_back(c);
    out.community_after.push_back(c);
    const std::uint64_t burst_start =
        spec.start_time + static_cast<std::uint64_t>(spec.dummy_at * static_cast<double>(spec.duration));
    std::vector<Event> burst;
    burst.reserve(spec.dummy_vertices);
    for (std::uint64_t j = 0; j < spec.dummy_vertices; ++j) {
      const auto dummy = static_cast<std::uint32_t>(n + 1 + j);
      out.community.push_back(c);
      out.community_after.push_back(c);
      burst.push_back({burst_start + (j * spec.dummy_span) / spec.dummy_vertices, attacker, dummy, transactions + j});
    }
    std::vector<Event> merged;
    merged.reserve(events.size() + burst.size());
    std::merge(events.begin(), events.end(), burst.begin(), burst.end(), std::back_inserter(merged),
               [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    events = std::move(merged);
  }

  std::vector<bool> seen(total_vertices, false);
  out.records.reserve(events.size());
  for (const auto& e : events) {
    TraceRecord r;
    r.timestamp = e.timestamp;
    r.block = (e.timestamp - spec.start_time) / spec.block_interval;
    r.from = out.addresses[e.from];
    r.from_kind = kind[e.from];
    r.to = out.addresses[e.to];
    r.to_kind = kind[e.to];
    if (kind[e.to] == VertexKind::Contract) {
      r.call_kind = seen[e.to] ? CallKind::ContractCall : CallKind::ContractCreate;
    } else {
      r.call_kind = CallKind::Transfer;
    }
    seen[e.from] = true;
    seen[e.to] = true;
    r.tx_id = "tx" + std::to_string(e.tx);
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string truth_to_csv(const SyntheticTrace& trace) {
  std::string out = "address,community,community_after\n";
  for (std::size_t i = 0; i < trace.addresses.size(); ++i) {
    out += trace.addresses[i].hex();
    out += ',';
    out += std::to_string(trace.community[i]);
    out += ',';
    out += std::to_string(trace.community_after[i]);
    out += '\n';
  }
  return out;
}

}  // namespace shardsim
