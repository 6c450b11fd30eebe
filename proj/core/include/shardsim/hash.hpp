#pragma once

#include <cstdint>
#include <span>

#include "shardsim/address.hpp"

namespace shardsim {

/// MurmurHash3 64-bit finalizer.
constexpr std::uint64_t fmix64(std::uint64_t h) noexcept {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

/// Seeded FNV-1a over `bytes` followed by fmix64. The seed is folded into the
/// offset basis through fmix64 so that nearby seeds give unrelated streams.
/// The result depends only on the bytes and the seed, never on the platform.
constexpr std::uint64_t seeded_fnv1a(std::span<const std::uint8_t> bytes,
                                     std::uint64_t seed) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ fmix64(seed);
  for (const std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return fmix64(h);
}

inline std::uint64_t address_hash(const Address& a, std::uint64_t seed) noexcept {
  return seeded_fnv1a(a.bytes(), seed);
}

}  // namespace shardsim
