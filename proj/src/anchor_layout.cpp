#include "anchorhash/detail/anchor_layout.hpp"

#include <algorithm>
#include <string>

#include "anchorhash/errors.hpp"
#include "anchorhash/snapshot.hpp"

namespace anchorhash {

std::string_view tier_name(Tier tier) noexcept {
  switch (tier) {
    case Tier::kMinimal:
      return "minimal";
    case Tier::kReduced:
      return "reduced";
    case Tier::kNaive:
      return "naive";
  }
  return "unknown";
}

Tier parse_tier(std::string_view name) {
  if (name == "minimal") return Tier::kMinimal;
  if (name == "reduced") return Tier::kReduced;
  if (name == "naive") return Tier::kNaive;
  throw ConfigError("unknown tier '" + std::string(name) + "'");
}

}  // namespace anchorhash

namespace anchorhash::detail {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw IntegrityError("anchor state: " + what);
}

}  // namespace

AnchorLayout::AnchorLayout(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed)
    : capacity_(capacity), working_(working), seed_(seed), top_salt_(top_level_salt(seed)) {
  if (working == 0 || working > capacity) {
    throw ContractViolation("init_anchor: need 1 <= working (" + std::to_string(working) +
                            ") <= capacity (" + std::to_string(capacity) + ")");
  }
  a_.assign(capacity, 0);
  w_.resize(capacity);
  l_.resize(capacity);
  r_.resize(capacity);
  for (std::uint32_t b = 0; b < capacity; ++b) {
    w_[b] = l_[b] = b;
  }
  // Initially unused buckets count as removed from a-1 downward, which makes
  // |W_b| == b for each of them.
  std::uint32_t top = 0;
  for (std::uint32_t b = capacity; b-- > working;) {
    r_[top++] = b;
    a_[b] = b;
  }
}

AnchorLayout::AnchorLayout(const AnchorSnapshot& snap)
    : capacity_(snap.capacity),
      working_(snap.working),
      seed_(snap.seed),
      top_salt_(top_level_salt(snap.seed)),
      a_(snap.A),
      w_(snap.W),
      l_(snap.L),
      r_(snap.R) {
  if (capacity_ == 0) corrupt("capacity is zero");
  if (a_.size() != capacity_ || w_.size() != capacity_ || l_.size() != capacity_) {
    corrupt("array length differs from capacity");
  }
  if (working_ == 0 || working_ > capacity_) corrupt("working count out of range");
  if (r_.size() != capacity_ - working_) corrupt("removal stack size != capacity - working");
  r_.resize(capacity_);
}

std::vector<BucketId> AnchorLayout::working_set() const {
  std::vector<BucketId> out(w_.begin(), w_.begin() + working_);
  std::sort(out.begin(), out.end());
  return out;
}

BucketId AnchorLayout::next_added_bucket() const {
  check_addable();
  return r_[removed_count() - 1];
}

void AnchorLayout::check_removable(BucketId b) const {
  if (b >= capacity_ || a_[b] != 0) {
    throw InvalidRemoval("remove_bucket: bucket " + std::to_string(b) + " is not working");
  }
  if (working_ == 1) {
    throw LastBucketError("remove_bucket: cannot remove the last working bucket " +
                          std::to_string(b));
  }
}

void AnchorLayout::check_addable() const {
  if (working_ == capacity_) {
    throw CapacityExhausted("add_bucket: all " + std::to_string(capacity_) +
                            " anchor buckets are working");
  }
}

std::uint32_t AnchorLayout::detach(BucketId b) noexcept {
  r_[removed_count()] = b;
  --working_;
  a_[b] = working_;
  const std::uint32_t last = w_[working_];
  w_[l_[b]] = last;
  l_[last] = l_[b];
  return last;
}

BucketId AnchorLayout::reattach() noexcept {
  const BucketId b = r_[removed_count() - 1];
  a_[b] = 0;
  l_[w_[working_]] = working_;
  w_[l_[b]] = b;
  ++working_;
  return b;
}

void AnchorLayout::validate_layout() const {
  if (working_ == 0 || working_ > capacity_) corrupt("working count out of range");
  const std::uint32_t removed = removed_count();

  std::vector<char> seen(capacity_, 0);
  for (std::uint32_t i = 0; i < working_; ++i) {
    const std::uint32_t b = w_[i];
    if (b >= capacity_) corrupt("W entry out of range");
    if (seen[b]) corrupt("W prefix repeats bucket " + std::to_string(b));
    seen[b] = 1;
    if (a_[b] != 0) corrupt("bucket " + std::to_string(b) + " in W prefix has A != 0");
    if (l_[b] != i) corrupt("L[W[i]] != i at i=" + std::to_string(i));
  }

  std::vector<char> on_stack(capacity_, 0);
  // Each removal shrinks the working set by one, so reading R bottom to top
  // the A values run capacity-1, capacity-2, ..., working.
  for (std::uint32_t i = 0; i < removed; ++i) {
    const std::uint32_t b = r_[i];
    if (b >= capacity_) corrupt("R entry out of range");
    if (on_stack[b]) corrupt("R repeats bucket " + std::to_string(b));
    on_stack[b] = 1;
    if (a_[b] != capacity_ - 1 - i) {
      corrupt("A[" + std::to_string(b) + "] does not match its depth in R");
    }
    if (l_[b] > a_[b]) corrupt("L of removed bucket beyond its working-set size");
  }

  for (std::uint32_t b = 0; b < capacity_; ++b) {
    const bool working = a_[b] == 0;
    if (working != static_cast<bool>(seen[b])) corrupt("A/W disagree on bucket " + std::to_string(b));
    if (!working && !on_stack[b]) corrupt("removed bucket " + std::to_string(b) + " missing from R");
    if (a_[b] >= capacity_) corrupt("A value out of range");
  }
}

void AnchorLayout::fill_snapshot(AnchorSnapshot& snap) const {
  snap.capacity = capacity_;
  snap.seed = seed_;
  snap.working = working_;
  snap.A = a_;
  snap.W = w_;
  snap.L = l_;
  snap.R.assign(r_.begin(), r_.begin() + removed_count());
}

}  // namespace anchorhash::detail
