#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "anchorhash/types.hpp"

namespace anchorhash {

enum class NaiveOrdering : std::uint8_t {
  // W_b stored in the working-array order shared with the other tiers.
  kReplacement = 0,
  // W_b stored sorted ascending.
  kAscending = 1,
};

// Flat record of an AnchorHash state. K is empty for the naive and reduced
// tiers; the extension blocks are empty for tiers that do not use them.
struct AnchorSnapshot {
  Tier tier = Tier::kMinimal;
  std::uint32_t capacity = 0;
  std::uint64_t seed = 0;
  std::uint32_t working = 0;
  std::vector<std::uint32_t> A;
  std::vector<std::uint32_t> K;
  std::vector<std::uint32_t> W;
  std::vector<std::uint32_t> L;
  std::vector<std::uint32_t> R;  // bottom to top

  // Naive tier: one stored W_b per entry of R, same order as R.
  NaiveOrdering naive_ordering = NaiveOrdering::kReplacement;
  std::vector<std::vector<std::uint32_t>> naive_sets;

  // Reduced tier: (b << 32 | h) -> bucket, sorted by key.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> reduced_entries;

  bool operator==(const AnchorSnapshot&) const = default;
};

// Binary encoding:
//   "AHSN" u32:version u8:tier u32:capacity u64:seed u32:working
//   u32:|R|  A[a] K[a or 0] W[a] L[a] R[|R|]
//   tier extension (naive: u8 ordering, per R entry u32 len + cells;
//                   reduced: u64 count + (u64 key, u32 value) pairs)
//   u32 crc32 of everything before it
// All integers little-endian.
std::string encode_snapshot(const AnchorSnapshot& snap);

// Throws IntegrityError on truncation, bad magic/version, checksum mismatch
// or inconsistent lengths. Structural invariants are checked by the tier
// that consumes the snapshot.
AnchorSnapshot decode_snapshot(std::string_view bytes);

void save_snapshot(const std::filesystem::path& path, const AnchorSnapshot& snap);
AnchorSnapshot load_snapshot(const std::filesystem::path& path);

nlohmann::json snapshot_to_json(const AnchorSnapshot& snap);

// Raw file helpers shared with the wrapper snapshot.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace anchorhash
