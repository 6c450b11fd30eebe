#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace shardsim {

/// 160-bit account/contract identifier. Parsed from 40 hex digits (an optional
/// "0x" prefix is stripped, case is ignored) and always printed lowercase
/// without prefix.
class Address {
public:
  static constexpr std::size_t kBytes = 20;
  using Bytes = std::array<std::uint8_t, kBytes>;

  Address() = default;
  explicit Address(const Bytes& bytes) : bytes_(bytes) {}

  /// Throws std::invalid_argument when `text` is not 40 hex digits.
  static Address parse(std::string_view text);
  /// Returns false instead of throwing.
  static bool try_parse(std::string_view text, Address& out);

  std::string hex() const;
  const Bytes& bytes() const { return bytes_; }

  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;

private:
  Bytes bytes_{};
};

struct AddressHash {
  std::size_t operator()(const Address& a) const noexcept;
};

enum class VertexKind : std::uint8_t { Account, Contract };

std::string_view to_string(VertexKind kind);
bool parse_vertex_kind(std::string_view text, VertexKind& out);

using ShardId = std::uint32_t;

}  // namespace shardsim

template <>
struct std::hash<shardsim::Address> : shardsim::AddressHash {};
