#include "shardsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace shardsim {

std::vector<SampleRow> to_rows(std::span<const MetricSample> samples, ShardId k) {
  std::vector<SampleRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back({s, normalized_balance(s.dynamic_balance, k)});
  return rows;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  if (ec != std::errc{}) return "nan";
  return {buf, ptr};
}

std::string samples_to_csv(std::span<const SampleRow> rows) {
  std::string out(kSampleCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    const auto& s = r.sample;
    out += std::to_string(s.window_start);
    for (const double v : {s.static_edge_cut, s.dynamic_edge_cut, s.static_balance, s.dynamic_balance,
                           r.normalized_dynamic_balance}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(s.moves);
    out += s.repartitioned ? ",1\n" : ",0\n";
  }
  return out;
}

std::string samples_to_json(std::span<const SampleRow> rows) {
  auto rounded = [](double v) { return std::stod(format_double(v)); };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    const auto& s = r.sample;
    nlohmann::ordered_json obj;
    obj["window_start"] = s.window_start;
    obj["static_edge_cut"] = rounded(s.static_edge_cut);
    obj["dynamic_edge_cut"] = rounded(s.dynamic_edge_cut);
    obj["static_balance"] = rounded(s.static_balance);
    obj["dynamic_balance"] = rounded(s.dynamic_balance);
    obj["normalized_dynamic_balance"] = rounded(r.normalized_dynamic_balance);
    obj["moves"] = s.moves;
    obj["repartitioned"] = s.repartitioned;
    arr.push_back(std::move(obj));
  }
  return arr.dump(1) + "\n";
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("samples line " + std::to_string(line) + ": bad number '" +
                             std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<SampleRow> parse_samples_csv(std::string_view text) {
  std::vector<SampleRow> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != kSampleCsvHeader) throw std::runtime_error("samples: unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cols.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 8) throw std::runtime_error("samples line " + std::to_string(line_no) + ": expected 8 columns");
    SampleRow r;
    r.sample.window_start = parse_number<std::uint64_t>(cols[0], line_no);
    r.sample.static_edge_cut = parse_number<double>(cols[1], line_no);
    r.sample.dynamic_edge_cut = parse_number<double>(cols[2], line_no);
    r.sample.static_balance = parse_number<double>(cols[3], line_no);
    r.sample.dynamic_balance = parse_number<double>(cols[4], line_no);
    r.normalized_dynamic_balance = parse_number<double>(cols[5], line_no);
    r.sample.moves = parse_number<std::size_t>(cols[6], line_no);
    r.sample.repartitioned = parse_number<int>(cols[7], line_no) != 0;
    rows.push_back(r);
  }
  if (!header) throw std::runtime_error("samples: missing header");
  return rows;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw EmptySeries();
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryStats five_number_summary(std::span<const double> values) {
  if (values.empty()) throw EmptySeries();
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return {v.front(), quantile_sorted(v, 0.25), quantile_sorted(v, 0.5), quantile_sorted(v, 0.75), v.back()};
}

Summary summarize(std::span<const SampleRow> rows) {
  if (rows.empty()) throw EmptySeries();
  Summary out;
  out.windows = rows.size();
  auto column = [&](auto getter) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(getter(r));
    return five_number_summary(v);
  };
  out.metrics.emplace_back("static_edge_cut", column([](const SampleRow& r) { return r.sample.static_edge_cut; }));
  out.metrics.emplace_back("dynamic_edge_cut", column([](const SampleRow& r) { return r.sample.dynamic_edge_cut; }));
  out.metrics.emplace_back("static_balance", column([](const SampleRow& r) { return r.sample.static_balance; }));
  out.metrics.emplace_back("dynamic_balance", column([](const SampleRow& r) { return r.sample.dynamic_balance; }));
  out.metrics.emplace_back("normalized_dynamic_balance",
                           column([](const SampleRow& r) { return r.normalized_dynamic_balance; }));
  out.metrics.emplace_back("moves", column([](const SampleRow& r) { return static_cast<double>(r.sample.moves); }));
  for (const auto& r : rows) {
    out.total_moves += r.sample.moves;
    if (r.sample.repartitioned) ++out.repartitions;
  }
  return out;
}

std::string format_summary(const Summary& summary) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %12s %12s %12s %12s %12s\n", "metric", "min", "q1", "median", "q3",
                "max");
  out += line;
  for (const auto& [name, s] : summary.metrics) {
    std::snprintf(line, sizeof line, "%-28s %12s %12s %12s %12s %12s\n", name.c_str(),
                  format_double(s.min).c_str(), format_double(s.q1).c_str(), format_double(s.median).c_str(),
                  format_double(s.q3).c_str(), format_double(s.max).c_str());
    out += line;
  }
  out += "windows " + std::to_string(summary.windows) + "\n";
  out += "repartitions " + std::to_string(summary.repartitions) + "\n";
  out += "total_moves " + std::to_string(summary.total_moves) + "\n";
  return out;
}

}  // namespace shardsim
