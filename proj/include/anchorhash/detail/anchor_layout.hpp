#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anchorhash/types.hpp"

namespace anchorhash {
struct AnchorSnapshot;
}

namespace anchorhash::detail {

// Bookkeeping common to all tiers: the anchor array A, the ordered working
// array W with its inverse L, the removal stack R and the working count N.
//
//   A[b] == 0            b is working
//   A[b] == |W_b|        b was removed, leaving |W_b| working buckets
//   W[0..N)              working buckets in replacement order
//   L[W[i]] == i         for i < N
//   R[0..top)            removed buckets, bottom to top, A strictly decreasing
class AnchorLayout {
 public:
  std::uint32_t capacity() const noexcept { return capacity_; }
  std::uint32_t size() const noexcept { return working_; }
  std::uint32_t removed_count() const noexcept { return capacity_ - working_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool is_working(BucketId b) const noexcept { return b < capacity_ && a_[b] == 0; }

  // Sorted working bucket ids.
  std::vector<BucketId> working_set() const;

  // Bucket that the next add_bucket() will return. Throws CapacityExhausted.
  BucketId next_added_bucket() const;

  std::span<const std::uint32_t> anchor_sizes() const noexcept { return a_; }
  std::span<const std::uint32_t> working_order() const noexcept { return w_; }
  std::span<const std::uint32_t> last_locations() const noexcept { return l_; }
  // Removed buckets bottom to top.
  std::span<const std::uint32_t> removed() const noexcept {
    return std::span<const std::uint32_t>(r_).first(removed_count());
  }

  // Mutating primitive operations performed by the last add/remove.
  std::uint64_t last_update_ops() const noexcept { return last_update_ops_; }

 protected:
  AnchorLayout(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed);
  explicit AnchorLayout(const AnchorSnapshot& snap);

  void check_removable(BucketId b) const;

  // Shared W/L/A/R update of a removal; returns the bucket that took b's
  // slot in W. Five primitive writes.
  std::uint32_t detach(BucketId b) noexcept;
  // Undo of the most recent detach(); returns the re-added bucket.
  BucketId reattach() noexcept;
  static constexpr std::uint64_t kLayoutUpdateOps = 5;
  void check_addable() const;

  // Throws IntegrityError on the first violated invariant.
  void validate_layout() const;
  void fill_snapshot(AnchorSnapshot& snap) const;

  std::uint32_t top_index(Key k) const noexcept {
    return static_cast<std::uint32_t>(mix64(k, top_salt_) % capacity_);
  }
  std::uint32_t rehash(Key k, BucketId b, std::uint32_t range) const noexcept {
    return static_cast<std::uint32_t>(mix64(k, bucket_salt(seed_, b)) % range);
  }

  std::uint32_t capacity_;
  std::uint32_t working_;
  std::uint64_t seed_;
  Salt top_salt_;
  std::vector<std::uint32_t> a_;
  std::vector<std::uint32_t> w_;
  std::vector<std::uint32_t> l_;
  // Fixed capacity stack; entries [0, capacity_ - working_) are live.
  std::vector<std::uint32_t> r_;
  std::uint64_t last_update_ops_ = 0;
};

}  // namespace anchorhash::detail
