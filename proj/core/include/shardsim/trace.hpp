#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shardsim/address.hpp"

namespace shardsim {

enum class CallKind : std::uint8_t { Transfer, ContractCall, ContractCreate };

std::string_view to_string(CallKind kind);
bool parse_call_kind(std::string_view text, CallKind& out);

/// One caller -> callee interaction. Records whose sender is an account open
/// a transaction; records sent by a contract are internal calls of the
/// transaction named by `tx_id`.
struct TraceRecord {
  std::uint64_t timestamp = 0;
  std::uint64_t block = 0;
  Address from;
  VertexKind from_kind = VertexKind::Account;
  Address to;
  VertexKind to_kind = VertexKind::Account;
  CallKind call_kind = CallKind::Transfer;
  std::string tx_id;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class TraceFormat { Csv, Jsonl };
enum class ErrorPolicy { Strict, Lenient };

class TraceError : public std::runtime_error {
public:
  enum class Code {
    MalformedRow,
    OutOfOrderBlock,
    UnknownCallKind,
    KindConflict,
    UseBeforeCreate,
    Io,
  };

  TraceError(Code code, std::size_t line, const std::string& what)
      : std::runtime_error(what), code_(code), line_(line) {}

  Code code() const noexcept { return code_; }
  /// 1-based input line, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

private:
  Code code_;
  std::size_t line_;
};

struct ParseResult {
  std::vector<TraceRecord> records;
  std::size_t data_rows = 0;  ///< non-blank rows after the header
  std::size_t skipped = 0;    ///< rows rejected under the lenient policy
  std::vector<std::string> diagnostics;
};

inline constexpr std::string_view kCsvHeader =
    "timestamp,block,from,from_kind,to,to_kind,call_kind,tx_id";

/// Parses a whole trace held in memory. Strict mode throws TraceError on the
/// first bad row; lenient mode skips it and records a diagnostic.
ParseResult parse_trace(std::string_view input, TraceFormat format,
                        ErrorPolicy policy = ErrorPolicy::Strict);

/// Infers csv/jsonl from the extension, looking through a trailing ".gz".
std::optional<TraceFormat> format_from_path(const std::filesystem::path& path);

/// Reads a file (transparently gunzipping `*.gz`) into memory.
std::string read_file(const std::filesystem::path& path);
/// Writes `data`, gzip-compressing when the path ends in ".gz".
void write_file(const std::filesystem::path& path, std::string_view data);

ParseResult read_trace_file(const std::filesystem::path& path,
                            std::optional<TraceFormat> format = std::nullopt,
                            ErrorPolicy policy = ErrorPolicy::Strict);

/// Canonical single-line rendering (no trailing newline).
std::string serialize_record(const TraceRecord& record, TraceFormat format);
/// Full document; the CSV variant starts with kCsvHeader.
std::string serialize_trace(std::span<const TraceRecord> records, TraceFormat format);

struct KindReport {
  std::vector<std::string> warnings;
};

/// Checks that every vertex keeps one kind and that contract creation
/// precedes any other use of the created contract. Strict mode throws
/// KindConflict / UseBeforeCreate; lenient mode downgrades both to warnings.
KindReport validate_kinds(std::span<const TraceRecord> records,
                          ErrorPolicy policy = ErrorPolicy::Strict);

}  // namespace shardsim
