#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shardsim/metrics.hpp"

namespace shardsim {

/// One output row: a sample plus its balance normalized by the shard count.
struct SampleRow {
  MetricSample sample;
  double normalized_dynamic_balance = 0.0;

  friend bool operator==(const SampleRow&, const SampleRow&) = default;
};

inline constexpr std::string_view kSampleCsvHeader =
    "window_start,static_edge_cut,dynamic_edge_cut,static_balance,dynamic_balance,"
    "normalized_dynamic_balance,moves,repartitioned";

std::vector<SampleRow> to_rows(std::span<const MetricSample> samples, ShardId k);

/// Six significant digits, shortest form ("%.6g"-style, ties to even on the
/// exact binary value). Negative zero prints as "0".
std::string format_double(double value);

std::string samples_to_csv(std::span<const SampleRow> rows);
std::string samples_to_json(std::span<const SampleRow> rows);
/// Inverse of samples_to_csv. Throws std::runtime_error on malformed input.
std::vector<SampleRow> parse_samples_csv(std::string_view text);

class EmptySeries : public std::invalid_argument {
public:
  EmptySeries() : std::invalid_argument("cannot summarize an empty series") {}
};

struct SummaryStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quantile of an ascending series by linear interpolation between the
/// closest ranks: position h = (n - 1) * p, value = x[floor h] + frac(h) *
/// (x[floor h + 1] - x[floor h]).
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws EmptySeries.
SummaryStats five_number_summary(std::span<const double> values);

struct Summary {
  std::vector<std::pair<std::string, SummaryStats>> metrics;
  std::size_t windows = 0;
  std::size_t repartitions = 0;
  std::size_t total_moves = 0;
};

/// Five-number summaries of every sample column. Throws EmptySeries.
Summary summarize(std::span<const SampleRow> rows);

/// Fixed-layout text table of a summary.
std::string format_summary(const Summary& summary);

}  // namespace shardsim
