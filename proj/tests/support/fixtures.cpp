#include "support/fixtures.hpp"

namespace shardsim::testing {

Address addr(std::uint64_t n) {
  std::string digits = std::to_string(n);
  return Address::parse(std::string(40 - digits.size(), '0') + digits);
}

TraceRecord rec(std::uint64_t timestamp, std::uint64_t from, std::uint64_t to, CallKind call,
                std::string tx) {
  TraceRecord r;
  r.timestamp = timestamp;
  r.block = timestamp;
  r.from = addr(from);
  r.to = addr(to);
  r.call_kind = call;
  r.to_kind = call == CallKind::Transfer ? VertexKind::Account : VertexKind::Contract;
  r.tx_id = tx.empty() ? "t" + std::to_string(timestamp) + "_" + std::to_string(from) : std::move(tx);
  return r;
}

std::vector<TraceRecord> contract_9703_trace() {
  std::vector<TraceRecord> out;
  std::uint64_t t = 1441000000;
  auto add = [&](std::uint64_t from, std::uint64_t to, VertexKind from_kind, VertexKind to_kind, int times) {
    for (int i = 0; i < times; ++i) {
      TraceRecord r;
      r.timestamp = t;
      r.block = t;
      ++t;
      r.from = addr(from);
      r.from_kind = from_kind;
      r.to = addr(to);
      r.to_kind = to_kind;
      r.call_kind = to_kind == VertexKind::Contract ? CallKind::ContractCall : CallKind::Transfer;
      r.tx_id = "tx" + std::to_string(out.size());
      out.push_back(r);
    }
  };
  using K = VertexKind;
  add(8900, 9703, K::Account, K::Contract, 13);
  add(8930, 9703, K::Account, K::Contract, 3);
  add(17303, 9703, K::Account, K::Contract, 2);
  for (const std::uint64_t to : {9960u, 17257u, 17265u}) add(9703, to, K::Contract, K::Account, 2);
  return out;
}

}  // namespace shardsim::testing
