#include "shardsim/trace.hpp"

#include <zlib.h>

#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace shardsim {
namespace {

using Code = TraceError::Code;

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6 && c >= 0xC2) {
      extra = 1;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
    } else if ((c >> 3) == 0x1E && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t j = 1; j <= extra; ++j) {
      if ((static_cast<unsigned char>(s[i + j]) >> 6) != 0x2) return false;
    }
    i += extra + 1;
  }
  return true;
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

[[noreturn]] void fail(Code code, std::size_t line, const std::string& reason) {
  throw TraceError(code, line, "line " + std::to_string(line) + ": " + reason);
}

struct RawFields {
  std::string_view timestamp, block, from, from_kind, to, to_kind, call_kind;
  std::string tx_id;
};

TraceRecord build_record(const RawFields& f, std::size_t line) {
  TraceRecord r;
  if (!parse_u64(f.timestamp, r.timestamp)) {
    fail(Code::MalformedRow, line, "bad timestamp '" + std::string(f.timestamp) + "'");
  }
  if (!parse_u64(f.block, r.block)) {
    fail(Code::MalformedRow, line, "bad block '" + std::string(f.block) + "'");
  }
  if (!Address::try_parse(f.from, r.from)) {
    fail(Code::MalformedRow, line, "bad from address '" + std::string(f.from) + "'");
  }
  if (!Address::try_parse(f.to, r.to)) {
    fail(Code::MalformedRow, line, "bad to address '" + std::string(f.to) + "'");
  }
  if (!parse_vertex_kind(f.from_kind, r.from_kind)) {
    fail(Code::MalformedRow, line, "bad from_kind '" + std::string(f.from_kind) + "'");
  }
  if (!parse_vertex_kind(f.to_kind, r.to_kind)) {
    fail(Code::MalformedRow, line, "bad to_kind '" + std::string(f.to_kind) + "'");
  }
  if (!parse_call_kind(f.call_kind, r.call_kind)) {
    fail(Code::UnknownCallKind, line, "unknown call kind '" + std::string(f.call_kind) + "'");
  }
  if (r.call_kind == CallKind::ContractCreate && r.to_kind != VertexKind::Contract) {
    fail(Code::MalformedRow, line, "contractcreate target must be a contract");
  }
  if (!valid_utf8(f.tx_id)) fail(Code::MalformedRow, line, "tx_id is not valid UTF-8");
  r.tx_id = f.tx_id;
  return r;
}

TraceRecord parse_csv_row(std::string_view row, std::size_t line) {
  std::string_view cols[8];
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (n == 8) fail(Code::MalformedRow, line, "expected 8 columns, got more");
    if (comma == std::string_view::npos) {
      cols[n++] = row.substr(start);
      break;
    }
    cols[n++] = row.substr(start, comma - start);
    start = comma + 1;
  }
  if (n != 8) fail(Code::MalformedRow, line, "expected 8 columns, got " + std::to_string(n));
  RawFields f{cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6], std::string(cols[7])};
  return build_record(f, line);
}

TraceRecord parse_json_row(std::string_view row, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(row);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Code::MalformedRow, line, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) fail(Code::MalformedRow, line, "expected a JSON object");

  auto number_text = [&](const char* key) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end()) fail(Code::MalformedRow, line, std::string("missing '") + key + "'");
    if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
    if (it->is_string()) return it->get<std::string>();
    fail(Code::MalformedRow, line, std::string("'") + key + "' must be an unsigned integer");
  };
  auto string_field = [&](const char* key) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      fail(Code::MalformedRow, line, std::string("missing or non-string '") + key + "'");
    }
    return it->get<std::string>();
  };

  const std::string ts = number_text("timestamp");
  const std::string block = number_text("block");
  const std::string from = string_field("from");
  const std::string from_kind = string_field("from_kind");
  const std::string to = string_field("to");
  const std::string to_kind = string_field("to_kind");
  const std::string call_kind = string_field("call_kind");
  RawFields f{ts, block, from, from_kind, to, to_kind, call_kind, string_field("tx_id")};
  return build_record(f, line);
}

}  // namespace

std::string_view to_string(CallKind kind) {
  switch (kind) {
    case CallKind::Transfer:
      return "transfer";
    case CallKind::ContractCall:
      return "contractcall";
    case CallKind::ContractCreate:
      return "contractcreate";
  }
  return "transfer";
}

bool parse_call_kind(std::string_view text, CallKind& out) {
  if (iequals(text, "transfer")) {
    out = CallKind::Transfer;
  } else if (iequals(text, "contractcall")) {
    out = CallKind::ContractCall;
  } else if (iequals(text, "contractcreate")) {
    out = CallKind::ContractCreate;
  } else {
    return false;
  }
  return true;
}

ParseResult parse_trace(std::string_view input, TraceFormat format, ErrorPolicy policy) {
  ParseResult result;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<std::uint64_t> last_block;

  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t eol = input.find('\n', pos);
    if (eol == std::string_view::npos) eol = input.size();
    std::string_view line = input.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (format == TraceFormat::Csv && !header_seen) {
      if (line.empty()) continue;
      if (line != kCsvHeader) {
        fail(Code::MalformedRow, line_no, "missing or unexpected CSV header");
      }
      header_seen = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    ++result.data_rows;
    try {
      TraceRecord record = format == TraceFormat::Csv ? parse_csv_row(line, line_no)
                                                      : parse_json_row(line, line_no);
      if (last_block && record.block < *last_block) {
        fail(Code::OutOfOrderBlock, line_no,
             "block " + std::to_string(record.block) + " after block " + std::to_string(*last_block));
      }
      last_block = record.block;
      result.records.push_back(std::move(record));
    } catch (const TraceError& e) {
      if (policy == ErrorPolicy::Strict) throw;
      ++result.skipped;
      result.diagnostics.emplace_back(e.what());
    }
  }
  return result;
}

std::optional<TraceFormat> format_from_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  if (p.extension() == ".gz") p = p.stem();
  const auto ext = p.extension().string();
  if (ext == ".csv") return TraceFormat::Csv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return TraceFormat::Jsonl;
  return std::nullopt;
}

std::string read_file(const std::filesystem::path& path) {
  // gzread passes uncompressed input through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) {
    throw TraceError(Code::Io, 0, "cannot open '" + path.string() + "'");
  }
  std::string data;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(file, buf, sizeof buf)) > 0) data.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(file);
  if (failed) throw TraceError(Code::Io, 0, "read error on '" + path.string() + "'");
  return data;
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  const bool compress = path.extension() == ".gz";
  gzFile file = gzopen(path.c_str(), compress ? "wb" : "wbT");
  if (file == nullptr) {
    throw TraceError(Code::Io, 0, "cannot write '" + path.string() + "'");
  }
  std::size_t off = 0;
  while (off < data.size()) {
    const auto chunk = static_cast<unsigned>(std::min<std::size_t>(data.size() - off, 1u << 20));
    if (gzwrite(file, data.data() + off, chunk) != static_cast<int>(chunk)) {
      gzclose(file);
      throw TraceError(Code::Io, 0, "write error on '" + path.string() + "'");
    }
    off += chunk;
  }
  if (gzclose(file) != Z_OK) throw TraceError(Code::Io, 0, "close error on '" + path.string() + "'");
}

ParseResult read_trace_file(const std::filesystem::path& path, std::optional<TraceFormat> format,
                            ErrorPolicy policy) {
  if (!format) format = format_from_path(path);
  if (!format) {
    throw TraceError(Code::Io, 0, "cannot infer trace format of '" + path.string() + "'");
  }
  return parse_trace(read_file(path), *format, policy);
}

std::string serialize_record(const TraceRecord& r, TraceFormat format) {
  if (format == TraceFormat::Jsonl) {
    nlohmann::ordered_json obj;
    obj["timestamp"] = r.timestamp;
    obj["block"] = r.block;
    obj["from"] = r.from.hex();
    obj["from_kind"] = to_string(r.from_kind);
    obj["to"] = r.to.hex();
    obj["to_kind"] = to_string(r.to_kind);
    obj["call_kind"] = to_string(r.call_kind);
    obj["tx_id"] = r.tx_id;
    return obj.dump();
  }
  std::string out;
  out.reserve(120 + r.tx_id.size());
  out += std::to_string(r.timestamp);
  out += ',';
  out += std::to_string(r.block);
  out += ',';
  out += r.from.hex();
  out += ',';
  out += to_string(r.from_kind);
  out += ',';
  out += r.to.hex();
  out += ',';
  out += to_string(r.to_kind);
  out += ',';
  out += to_string(r.call_kind);
  out += ',';
  out += r.tx_id;
  return out;
}

std::string serialize_trace(std::span<const TraceRecord> records, TraceFormat format) {
  std::string out;
  if (format == TraceFormat::Csv) {
    out += kCsvHeader;
    out += '\n';
  }
  for (const auto& r : records) {
    out += serialize_record(r, format);
    out += '\n';
  }
  return out;
}

KindReport validate_kinds(std::span<const TraceRecord> records, ErrorPolicy policy) {
  KindReport report;
  std::unordered_map<Address, VertexKind> kinds;
  std::unordered_set<Address> used;
  std::unordered_set<Address> created;

  auto problem = [&](Code code, std::size_t index, const std::string& msg) {
    const std::string text = "record " + std::to_string(index + 1) + ": " + msg;
    if (policy == ErrorPolicy::Strict) throw TraceError(code, 0, text);
    report.warnings.push_back(text);
  };
  auto observe = [&](const Address& v, VertexKind kind, std::size_t index) {
    auto [it, inserted] = kinds.emplace(v, kind);
    if (!inserted && it->second != kind) {
      problem(Code::KindConflict, index,
              "vertex " + v.hex() + " seen as " + std::string(to_string(it->second)) +
                  " and as " + std::string(to_string(kind)));
    }
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    observe(r.from, r.from_kind, i);
    observe(r.to, r.to_kind, i);
    if (r.call_kind == CallKind::ContractCreate) {
      if (used.contains(r.to) && !created.contains(r.to)) {
        problem(Code::UseBeforeCreate, i, "contract " + r.to.hex() + " used before its creation");
      }
      created.insert(r.to);
    }
    used.insert(r.from);
    used.insert(r.to);
  }
  return report;
}

}  // namespace shardsim
