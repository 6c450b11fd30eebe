#include "shardsim/address.hpp"

#include <cstring>
#include <stdexcept>

#include "shardsim/hash.hpp"

namespace shardsim {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i];
    char y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

}  // namespace

bool Address::try_parse(std::string_view text, Address& out) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  if (text.size() != 2 * kBytes) return false;
  Bytes bytes{};
  for (std::size_t i = 0; i < kBytes; ++i) {
    const int hi = hex_value(text[2 * i]);
    const int lo = hex_value(text[2 * i + 1]);
    if (hi < 0 || lo < 0) return false;
    bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  out = Address(bytes);
  return true;
}

Address Address::parse(std::string_view text) {
  Address a;
  if (!try_parse(text, a)) {
    throw std::invalid_argument("invalid address '" + std::string(text) + "'");
  }
  return a;
}

std::string Address::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * kBytes, '0');
  for (std::size_t i = 0; i < kBytes; ++i) {
    out[2 * i] = kDigits[bytes_[i] >> 4];
    out[2 * i + 1] = kDigits[bytes_[i] & 0xF];
  }
  return out;
}

std::size_t AddressHash::operator()(const Address& a) const noexcept {
  return static_cast<std::size_t>(address_hash(a, 0));
}

std::string_view to_string(VertexKind kind) {
  return kind == VertexKind::Contract ? "contract" : "account";
}

bool parse_vertex_kind(std::string_view text, VertexKind& out) {
  if (iequals(text, "account")) {
    out = VertexKind::Account;
    return true;
  }
  if (iequals(text, "contract")) {
    out = VertexKind::Contract;
    return true;
  }
  return false;
}

}  // namespace shardsim
