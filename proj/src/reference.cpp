#include "anchorhash/reference.hpp"

#include <algorithm>
#include <string>

#include "anchorhash/errors.hpp"

namespace anchorhash {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw IntegrityError("anchor state: " + what);
}

// Sorted members of W_b, recovered from A alone: everything that was still
// working when b left has a smaller A value.
std::vector<std::uint32_t> members_at_removal(std::span<const std::uint32_t> a, BucketId b) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < a.size(); ++x) {
    if (a[x] < a[b]) out.push_back(x);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- naive

NaiveAnchor::NaiveAnchor(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed,
                         NaiveOrdering ordering)
    : AnchorLayout(capacity, working, seed), ordering_(ordering), sets_(capacity) {
  // W stays the identity until the first real removal, so every initially
  // unused bucket b stores W_b = {0, ..., b-1}.
  for (std::uint32_t b = working; b < capacity; ++b) {
    sets_[b].resize(b);
    for (std::uint32_t i = 0; i < b; ++i) {
      sets_[b][i] = i;
    }
    stored_cells_ += b;
  }
}

NaiveAnchor::NaiveAnchor(const AnchorSnapshot& snap)
    : AnchorLayout(snap), ordering_(snap.naive_ordering), sets_(snap.capacity) {
  if (snap.naive_sets.size() != snap.R.size()) {
    corrupt("naive extension has " + std::to_string(snap.naive_sets.size()) + " sets for " +
            std::to_string(snap.R.size()) + " removed buckets");
  }
  for (std::size_t i = 0; i < snap.R.size(); ++i) {
    const std::uint32_t b = snap.R[i];
    if (b >= capacity_) corrupt("R entry out of range");
    sets_[b] = snap.naive_sets[i];
    stored_cells_ += sets_[b].size();
  }
  validate();
}

std::vector<std::uint32_t> NaiveAnchor::capture_working_set() const {
  std::vector<std::uint32_t> set(w_.begin(), w_.begin() + working_);
  if (ordering_ == NaiveOrdering::kAscending) {
    std::sort(set.begin(), set.end());
  }
  return set;
}

TracedBucket NaiveAnchor::get_bucket_traced(Key k) const noexcept {
  LookupTrace t;
  std::uint32_t b = top_index(k);
  t.hash_ops = 1;
  t.memory_accesses = 1;
  while (a_[b] > 0) {
    b = sets_[b][rehash(k, b, a_[b])];
    ++t.hash_ops;
    t.memory_accesses += 2;  // stored cell, then A of the result
  }
  t.array_reads = t.memory_accesses;
  return {b, t};
}

BucketId NaiveAnchor::add_bucket() {
  check_addable();
  const BucketId top = r_[removed_count() - 1];
  const std::uint64_t freed = sets_[top].size();
  stored_cells_ -= freed;
  std::vector<std::uint32_t>().swap(sets_[top]);
  const BucketId b = reattach();
  last_update_ops_ = kLayoutUpdateOps + freed;
  return b;
}

void NaiveAnchor::remove_bucket(BucketId b) {
  check_removable(b);
  detach(b);
  sets_[b] = capture_working_set();
  stored_cells_ += sets_[b].size();
  last_update_ops_ = kLayoutUpdateOps + sets_[b].size();
}

void NaiveAnchor::validate() const {
  validate_layout();
  std::uint64_t cells = 0;
  for (std::uint32_t b = 0; b < capacity_; ++b) {
    const auto& set = sets_[b];
    cells += set.size();
    if (a_[b] == 0) {
      if (!set.empty()) corrupt("working bucket " + std::to_string(b) + " has a stored set");
      continue;
    }
    if (set.size() != a_[b]) corrupt("stored set size != A for bucket " + std::to_string(b));
    auto sorted = set;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != members_at_removal(a_, b)) {
      corrupt("stored set of bucket " + std::to_string(b) + " is not W_b");
    }
    if (ordering_ == NaiveOrdering::kAscending && sorted != set) {
      corrupt("ascending ordering violated for bucket " + std::to_string(b));
    }
  }
  if (cells != stored_cells_) corrupt("stored cell count out of sync");
}

AnchorSnapshot NaiveAnchor::to_snapshot() const {
  AnchorSnapshot snap;
  snap.tier = kTier;
  fill_snapshot(snap);
  snap.naive_ordering = ordering_;
  for (const std::uint32_t b : removed()) {
    snap.naive_sets.push_back(sets_[b]);
  }
  return snap;
}

NaiveAnchor NaiveAnchor::from_snapshot(const AnchorSnapshot& snap) {
  if (snap.tier != kTier) {
    throw TierMismatch("snapshot holds the " + std::string(tier_name(snap.tier)) +
                       " tier, expected naive");
  }
  return NaiveAnchor(snap);
}

// -------------------------------------------------------------- reduced

ReducedAnchor::ReducedAnchor(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed)
    : AnchorLayout(capacity, working, seed) {}

ReducedAnchor::ReducedAnchor(const AnchorSnapshot& snap) : AnchorLayout(snap) {
  for (const auto& [key, value] : snap.reduced_entries) {
    entries_.emplace(key, value);
  }
  if (entries_.size() != snap.reduced_entries.size()) corrupt("duplicate reduced entries");
  validate();
}

std::uint32_t ReducedAnchor::resolve(BucketId b, std::uint32_t h) const {
  const auto it = entries_.find(entry_key(b, h));
  return it == entries_.end() ? h : it->second;
}

TracedBucket ReducedAnchor::get_bucket_traced(Key k) const noexcept {
  LookupTrace t;
  std::uint32_t b = top_index(k);
  t.hash_ops = 1;
  t.memory_accesses = 1;
  while (a_[b] > 0) {
    const std::uint32_t h = rehash(k, b, a_[b]);
    const auto it = entries_.find(entry_key(b, h));
    b = it == entries_.end() ? h : it->second;
    ++t.hash_ops;
    t.memory_accesses += 2;  // entry probe, then A of the result
  }
  t.array_reads = t.memory_accesses;
  return {b, t};
}

BucketId ReducedAnchor::add_bucket() {
  check_addable();
  const BucketId top = r_[removed_count() - 1];
  // W is exactly as it was right after top's removal; erase by the same rule
  // that created the entries.
  for (std::uint32_t h = 0; h < a_[top]; ++h) {
    if (w_[h] != h) entries_.erase(entry_key(top, h));
  }
  const std::uint64_t scanned = a_[top];
  const BucketId b = reattach();
  last_update_ops_ = kLayoutUpdateOps + scanned;
  return b;
}

void ReducedAnchor::remove_bucket(BucketId b) {
  check_removable(b);
  detach(b);
  for (std::uint32_t h = 0; h < working_; ++h) {
    if (w_[h] != h) entries_[entry_key(b, h)] = w_[h];
  }
  last_update_ops_ = kLayoutUpdateOps + working_;
}

void ReducedAnchor::validate() const {
  validate_layout();
  for (const auto& [key, value] : entries_) {
    const auto b = static_cast<std::uint32_t>(key >> 32);
    const auto h = static_cast<std::uint32_t>(key & 0xffffffffu);
    if (b >= capacity_ || a_[b] == 0) corrupt("entry for a working bucket");
    if (h >= a_[b]) corrupt("entry index beyond |W_b|");
    if (value == h) corrupt("stored fixed point");
    if (value >= capacity_ || a_[value] >= a_[b]) corrupt("entry value not in W_b");
  }
  const std::uint64_t r = removed_count();
  if (entries_.size() > r * (r + 1) / 2) corrupt("more entries than |R|(|R|+1)/2");
}

AnchorSnapshot ReducedAnchor::to_snapshot() const {
  AnchorSnapshot snap;
  snap.tier = kTier;
  fill_snapshot(snap);
  snap.reduced_entries.assign(entries_.begin(), entries_.end());
  std::sort(snap.reduced_entries.begin(), snap.reduced_entries.end());
  return snap;
}

ReducedAnchor ReducedAnchor::from_snapshot(const AnchorSnapshot& snap) {
  if (snap.tier != kTier) {
    throw TierMismatch("snapshot holds the " + std::string(tier_name(snap.tier)) +
                       " tier, expected reduced");
  }
  return ReducedAnchor(snap);
}

}  // namespace anchorhash
