#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shardsim/address.hpp"
#include "shardsim/trace.hpp"

namespace shardsim::testing {

/// Address whose hex form is the decimal digits of `n`, left-padded with
/// zeros: addr(8900) prints as "000...008900".
Address addr(std::uint64_t n);

TraceRecord rec(std::uint64_t timestamp, std::uint64_t from, std::uint64_t to,
                CallKind call = CallKind::Transfer, std::string tx = {});

/// The subgraph around contract 9703: 13 + 3 + 2 instantiations from
/// 8900, 8930 and 17303, and two transfers from 9703 to each of 9960,
/// 17257 and 17265.
std::vector<TraceRecord> contract_9703_trace();

}  // namespace shardsim::testing
