#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shardsim/replay.hpp"
#include "shardsim/trace.hpp"

namespace shardsim {

/// Planted-partition workload. Vertices are split round-robin into
/// `communities`; each transaction starts at an account drawn by Zipf
/// activity and targets a vertex of the sender's community, or of a random
/// other community with probability `inter_probability`.
struct WorkloadSpec {
  std::size_t vertices = 1000;
  std::size_t communities = 2;
  double inter_probability = 0.05;
  /// Exponent of the rank-frequency law over vertices (0 = uniform).
  double zipf_exponent = 0.0;
  std::uint64_t duration = 14 * kDay;
  double records_per_hour = 100.0;
  /// Fraction of vertices that are contracts. Contracts never start a
  /// transaction; when called they forward one internal call with
  /// probability internal_call_probability.
  double contract_fraction = 0.0;
  double internal_call_probability = 0.3;
  std::uint64_t start_time = 1'500'000'000;
  std::uint64_t block_interval = 15;

  /// At rewire_at * duration (disabled when negative) a random
  /// rewire_fraction of each community moves to the next community.
  double rewire_at = -1.0;
  double rewire_fraction = 0.5;

  /// One-shot burst: a dedicated account transfers once to each of
  /// `dummy_vertices` fresh accounts, spread over dummy_span starting at
  /// dummy_at * duration. The dummies are never used again.
  std::size_t dummy_vertices = 0;
  double dummy_at = 0.1;
  std::uint64_t dummy_span = 6 * kHour;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Reads a JSON object whose keys are the field names above (durations
/// accept numbers of seconds or strings such as "14d"). Missing keys keep
/// their defaults; unknown keys are rejected.
WorkloadSpec parse_workload_json(std::string_view json);

struct SyntheticTrace {
  std::vector<TraceRecord> records;
  std::vector<Address> addresses;  ///< community vertices, then attacker and dummies
  /// Planted community per address before and after rewiring. The burst
  /// account and its dummies get label `communities`.
  std::vector<std::uint32_t> community;
  std::vector<std::uint32_t> community_after;
};

/// Deterministic in (spec, seed).
SyntheticTrace synth_trace(const WorkloadSpec& spec, std::uint64_t seed);

/// CSV with header "address,community,community_after".
std::string truth_to_csv(const SyntheticTrace& trace);

}  // namespace shardsim
