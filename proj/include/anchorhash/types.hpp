#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>
#include <vector>

#include "anchorhash/hashing.hpp"

namespace anchorhash {

using BucketId = std::uint32_t;

// Per-lookup instrumentation.
//   hash_ops         number of hash_to_range evaluations (tau)
//   memory_accesses  one initial A read, one A read per rehash and one per
//                    successor-resolution step (xi, the memory-access model
//                    used by the minimal tier's average-case bound)
//   array_reads      every individual A/K (or KV) element read; report-only
struct LookupTrace {
  std::uint32_t hash_ops = 0;
  std::uint32_t memory_accesses = 0;
  std::uint32_t array_reads = 0;
};

struct TracedBucket {
  BucketId bucket;
  LookupTrace trace;
};

// The three AnchorHash implementations. Values are part of the snapshot
// format; do not renumber.
enum class Tier : std::uint8_t {
  kMinimal = 1,
  kReduced = 2,
  kNaive = 3,
};

std::string_view tier_name(Tier tier) noexcept;
// Accepts "minimal", "reduced", "naive". Throws ConfigError otherwise.
Tier parse_tier(std::string_view name);

// Operations shared by every AnchorHash tier.
template <class T>
concept AnchorTier = requires(T& t, const T& ct, Key k, BucketId b) {
  { T::kTier } -> std::convertible_to<Tier>;
  { ct.get_bucket(k) } -> std::same_as<BucketId>;
  { ct.get_bucket_traced(k) } -> std::same_as<TracedBucket>;
  { t.add_bucket() } -> std::same_as<BucketId>;
  t.remove_bucket(b);
  { ct.capacity() } -> std::same_as<std::uint32_t>;
  { ct.size() } -> std::same_as<std::uint32_t>;
  { ct.is_working(b) } -> std::same_as<bool>;
  { ct.working_set() } -> std::same_as<std::vector<BucketId>>;
  { ct.next_added_bucket() } -> std::same_as<BucketId>;
  { ct.last_update_ops() } -> std::same_as<std::uint64_t>;
  ct.validate();
};

}  // namespace anchorhash
