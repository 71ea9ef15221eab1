#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anchorhash/detail/anchor_layout.hpp"
#include "anchorhash/snapshot.hpp"
#include "anchorhash/types.hpp"

namespace anchorhash {

/// Minimal-memory AnchorHash: four integer arrays of the anchor size plus
/// the removal stack. Updates are O(1); a lookup hashes into shrinking
/// working sets, resolving each W_b entry through the successor array K.
///
/// Thread safety: lookups (get_bucket, get_bucket_traced, working_set) are
/// read-only and may run concurrently with each other. add_bucket and
/// remove_bucket need exclusive access. No internal locking.
class AnchorHash : public detail::AnchorLayout {
 public:
  static constexpr Tier kTier = Tier::kMinimal;

  /// Anchor of `capacity` buckets with buckets [0, working) in use. The
  /// remaining ids are pushed on the removal stack from capacity-1 down, so
  /// the first add_bucket() returns `working`.
  AnchorHash(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed = 0);

  BucketId get_bucket(Key k) const noexcept {
    std::uint32_t b = top_index(k);
    std::uint32_t size_b = a_[b];
    while (size_b > 0) {
      std::uint32_t h = rehash(k, b, size_b);
      std::uint32_t size_h = a_[h];
      // h left the working set before b did: W_b[h] is a successor of h.
      while (size_h >= size_b) {
        h = k_[h];
        size_h = a_[h];
      }
      b = h;
      size_b = size_h;
    }
    return b;
  }

  TracedBucket get_bucket_traced(Key k) const noexcept;

  /// Re-adds the most recently removed bucket and returns it.
  /// Throws CapacityExhausted when every bucket is working.
  BucketId add_bucket();

  /// Throws InvalidRemoval if b is not working, LastBucketError if b is the
  /// only working bucket.
  void remove_bucket(BucketId b);

  std::span<const std::uint32_t> successors() const noexcept { return k_; }

  void validate() const;

  AnchorSnapshot to_snapshot() const;
  /// Throws TierMismatch for snapshots of another tier and IntegrityError
  /// if the decoded state breaks an invariant.
  static AnchorHash from_snapshot(const AnchorSnapshot& snap);

 private:
  explicit AnchorHash(const AnchorSnapshot& snap);

  std::vector<std::uint32_t> k_;
};

}  // namespace anchorhash
