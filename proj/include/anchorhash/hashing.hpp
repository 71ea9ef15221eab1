#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "anchorhash/errors.hpp"

namespace anchorhash {

using Key = std::uint64_t;
using Salt = std::uint64_t;

// SplitMix64 finalizer applied to key ^ rotl(salt, 31). Bit-exact across
// platforms; tests pin it against a checked-in golden file.
constexpr std::uint64_t mix64(Key key, Salt salt) noexcept {
  std::uint64_t x = key ^ std::rotl(salt, 31);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mix64(key, salt) mod range. Throws ContractViolation on range == 0.
inline std::uint64_t hash_to_range(Key key, Salt salt, std::uint64_t range) {
  if (range == 0) {
    throw ContractViolation("hash_to_range: range must be positive");
  }
  return mix64(key, salt) % range;
}

// Salt layout shared by all AnchorHash tiers. Bucket b hashes with
// seed ^ b; the outermost hash over the whole anchor uses seed ^ 2^63,
// which no 32-bit bucket id can reach.
inline constexpr Salt kTopLevelSaltBit = Salt{1} << 63;

constexpr Salt bucket_salt(std::uint64_t seed, std::uint32_t bucket) noexcept {
  return seed ^ Salt{bucket};
}

constexpr Salt top_level_salt(std::uint64_t seed) noexcept {
  return seed ^ kTopLevelSaltBit;
}

// Deterministic 64-bit digest of an opaque byte string (resource ids).
// Length-seeded mix64 fold over little-endian 8-byte chunks.
std::uint64_t hash_bytes(std::string_view bytes) noexcept;

// Key stream from a seeded mt19937_64. The generator seed is first passed
// through mix64 with a fixed salt so key streams never share a seed with
// the hashing layer.
std::vector<Key> make_keys(std::size_t count, std::uint64_t seed);

}  // namespace anchorhash
