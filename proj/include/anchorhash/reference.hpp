#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "anchorhash/detail/anchor_layout.hpp"
#include "anchorhash/snapshot.hpp"
#include "anchorhash/types.hpp"

namespace anchorhash {

// Naive tier: every removed bucket b keeps a full copy of W_b, and a rehash
// is a direct index into it. Memory grows as a*|R|; updates cost |W|.
// Same thread-safety contract as AnchorHash.
class NaiveAnchor : public detail::AnchorLayout {
 public:
  static constexpr Tier kTier = Tier::kNaive;

  NaiveAnchor(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed = 0,
              NaiveOrdering ordering = NaiveOrdering::kReplacement);

  BucketId get_bucket(Key k) const noexcept {
    std::uint32_t b = top_index(k);
    while (a_[b] > 0) {
      b = sets_[b][rehash(k, b, a_[b])];
    }
    return b;
  }

  TracedBucket get_bucket_traced(Key k) const noexcept;
  BucketId add_bucket();
  void remove_bucket(BucketId b);

  NaiveOrdering ordering() const noexcept { return ordering_; }

  // Stored W_b for a removed bucket (empty for working buckets).
  const std::vector<std::uint32_t>& stored_set(BucketId b) const { return sets_.at(b); }

  // Total cells across all stored W_b arrays.
  std::uint64_t stored_cells() const noexcept { return stored_cells_; }

  void validate() const;

  AnchorSnapshot to_snapshot() const;
  static NaiveAnchor from_snapshot(const AnchorSnapshot& snap);

 private:
  explicit NaiveAnchor(const AnchorSnapshot& snap);
  std::vector<std::uint32_t> capture_working_set() const;

  NaiveOrdering ordering_;
  std::vector<std::vector<std::uint32_t>> sets_;
  std::uint64_t stored_cells_ = 0;
};

// Reduced-memory tier: W_b is kept only where it differs from the identity
// ordering, as individual entries keyed by (b, h).
// Same thread-safety contract as AnchorHash.
class ReducedAnchor : public detail::AnchorLayout {
 public:
  static constexpr Tier kTier = Tier::kReduced;

  ReducedAnchor(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed = 0);

  BucketId get_bucket(Key k) const noexcept {
    std::uint32_t b = top_index(k);
    while (a_[b] > 0) {
      const std::uint32_t h = rehash(k, b, a_[b]);
      const auto it = entries_.find(entry_key(b, h));
      b = it == entries_.end() ? h : it->second;
    }
    return b;
  }

  TracedBucket get_bucket_traced(Key k) const noexcept;
  BucketId add_bucket();
  void remove_bucket(BucketId b);

  // Stored (b, h) entries, i.e. non-fixed points over all W_b.
  std::size_t stored_entries() const noexcept { return entries_.size(); }
  // Entry for (b, h), or h itself when (b, h) is a fixed point.
  std::uint32_t resolve(BucketId b, std::uint32_t h) const;
  bool has_entry(BucketId b, std::uint32_t h) const { return entries_.contains(entry_key(b, h)); }

  void validate() const;

  AnchorSnapshot to_snapshot() const;
  static ReducedAnchor from_snapshot(const AnchorSnapshot& snap);

  static constexpr std::uint64_t entry_key(BucketId b, std::uint32_t h) noexcept {
    return (std::uint64_t{b} << 32) | h;
  }

 private:
  explicit ReducedAnchor(const AnchorSnapshot& snap);

  std::unordered_map<std::uint64_t, std::uint32_t> entries_;
};

}  // namespace anchorhash
