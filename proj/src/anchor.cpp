#include "anchorhash/anchor.hpp"

#include <string>

#include "anchorhash/errors.hpp"

namespace anchorhash {

AnchorHash::AnchorHash(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed)
    : AnchorLayout(capacity, working, seed), k_(capacity) {
  for (std::uint32_t b = 0; b < capacity; ++b) {
    k_[b] = b;
  }
}

AnchorHash::AnchorHash(const AnchorSnapshot& snap) : AnchorLayout(snap), k_(snap.K) {
  if (k_.size() != capacity_) {
    throw IntegrityError("anchor state: K length differs from capacity");
  }
  validate();
}

TracedBucket AnchorHash::get_bucket_traced(Key k) const noexcept {
  LookupTrace t;
  std::uint32_t b = top_index(k);
  ++t.hash_ops;
  std::uint32_t size_b = a_[b];
  ++t.memory_accesses;
  ++t.array_reads;
  while (size_b > 0) {
    std::uint32_t h = rehash(k, b, size_b);
    ++t.hash_ops;
    std::uint32_t size_h = a_[h];
    ++t.memory_accesses;
    ++t.array_reads;
    while (size_h >= size_b) {
      h = k_[h];
      size_h = a_[h];
      // One resolution step: the K read and the A read of the successor.
      ++t.memory_accesses;
      t.array_reads += 2;
    }
    b = h;
    size_b = size_h;
  }
  return {b, t};
}

BucketId AnchorHash::add_bucket() {
  check_addable();
  std::uint64_t ops = 0;
  const BucketId b = r_[removed_count() - 1];
  ++ops;  // pop
  a_[b] = 0;
  ++ops;
  l_[w_[working_]] = working_;
  ++ops;
  w_[l_[b]] = b;
  k_[b] = b;
  ops += 2;
  ++working_;
  ++ops;
  last_update_ops_ = ops;
  return b;
}

void AnchorHash::remove_bucket(BucketId b) {
  check_removable(b);
  std::uint64_t ops = 0;
  r_[removed_count()] = b;
  ++ops;  // push
  --working_;
  ++ops;
  a_[b] = working_;
  ++ops;
  const std::uint32_t last = w_[working_];
  w_[l_[b]] = last;
  k_[b] = last;
  ops += 2;
  l_[last] = l_[b];
  ++ops;
  last_update_ops_ = ops;
}

void AnchorHash::validate() const {
  validate_layout();
  for (std::uint32_t b = 0; b < capacity_; ++b) {
    if (k_[b] >= capacity_) throw IntegrityError("anchor state: K entry out of range");
    if (a_[b] == 0 && k_[b] != b) {
      throw IntegrityError("anchor state: working bucket " + std::to_string(b) + " has K[b] != b");
    }
    // A successor was working when b left, so it sits lower in A; the only
    // self-successor is a bucket that occupied the last slot of W.
    if (a_[b] > 0 && !(a_[k_[b]] < a_[b] || (k_[b] == b && l_[b] == a_[b]))) {
      throw IntegrityError("anchor state: bad successor for removed bucket " + std::to_string(b));
    }
  }
}

AnchorSnapshot AnchorHash::to_snapshot() const {
  AnchorSnapshot snap;
  snap.tier = kTier;
  fill_snapshot(snap);
  snap.K = k_;
  return snap;
}

AnchorHash AnchorHash::from_snapshot(const AnchorSnapshot& snap) {
  if (snap.tier != kTier) {
    throw TierMismatch("snapshot holds the " + std::string(tier_name(snap.tier)) +
                       " tier, expected minimal");
  }
  return AnchorHash(snap);
}

}  // namespace anchorhash
