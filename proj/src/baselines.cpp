#include "anchorhash/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "anchorhash/errors.hpp"
#include "anchorhash/hashing.hpp"

namespace anchorhash {

namespace {

constexpr Salt kRingKeySalt = 0x72696e676b657973ULL;    // "ringkeys"
constexpr Salt kMaglevKeySalt = 0x6d61676c65766b79ULL;  // "maglevky"
constexpr Salt kOffsetSalt = 0x6f66667365747373ULL;     // "offsetss"
constexpr Salt kSkipSalt = 0x736b697073616c74ULL;       // "skipsalt"

}  // namespace

namespace detail {

Label ResourceRegistry::insert(const ResourceId& id) {
  const auto label = static_cast<Label>(by_label_.size());
  if (!labels_.emplace(id, label).second) {
    throw DuplicateResource("resource '" + id.str() + "' is already live");
  }
  by_label_.emplace_back(id);
  return label;
}

Label ResourceRegistry::erase(const ResourceId& id) {
  const auto it = labels_.find(id);
  if (it == labels_.end()) throw UnknownResource("resource '" + id.str() + "' is not live");
  if (labels_.size() == 1) throw LastResourceError("resource '" + id.str() + "' is the last one");
  const Label label = it->second;
  labels_.erase(it);
  by_label_[label].reset();
  return label;
}

Label ResourceRegistry::find(const ResourceId& id) const {
  const auto it = labels_.find(id);
  if (it == labels_.end()) throw UnknownResource("resource '" + id.str() + "' is not live");
  return it->second;
}

const ResourceId& ResourceRegistry::at(Label label) const {
  if (label >= by_label_.size() || !by_label_[label]) {
    throw ContractViolation("no live resource with label " + std::to_string(label));
  }
  return *by_label_[label];
}

std::vector<Label> ResourceRegistry::live() const {
  std::vector<Label> out;
  for (Label l = 0; l < by_label_.size(); ++l) {
    if (by_label_[l]) out.push_back(l);
  }
  return out;
}

}  // namespace detail

// ------------------------------------------------------------------ HRW

Hrw::Hrw(std::span<const ResourceId> resources, std::uint64_t seed) : seed_(seed) {
  if (resources.empty()) throw ContractViolation("hrw: need at least one resource");
  for (const auto& id : resources) add_resource(id);
}

Label Hrw::lookup(Key k) const {
  // Weights are computed a block at a time into a buffer so the hash loop
  // vectorizes; ties (practically never) take the slow path.
  constexpr std::size_t kBlock = 256;
  std::uint64_t weights[kBlock];
  std::uint64_t best = 0;
  std::size_t at = 0;
  std::size_t best_count = 0;
  for (std::size_t start = 0; start < salts_.size(); start += kBlock) {
    const std::size_t n = std::min(kBlock, salts_.size() - start);
    const Salt* salts = salts_.data() + start;
    for (std::size_t i = 0; i < n; ++i) weights[i] = mix64(k, salts[i]);
    std::uint64_t block_best = 0;
    for (std::size_t i = 0; i < n; ++i) block_best = std::max(block_best, weights[i]);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += weights[i] == block_best;
    if (block_best > best || best_count == 0) {
      best = block_best;
      best_count = count;
      at = start + static_cast<std::size_t>(std::find(weights, weights + n, block_best) - weights);
    } else if (block_best == best) {
      best_count += count;
    }
  }
  return best_count > 1 ? lookup_with_ties(k) : labels_[at];
}

// Slow path for equal top weights: the smaller resource id wins.
Label Hrw::lookup_with_ties(Key k) const {
  std::size_t at = 0;
  std::uint64_t best = mix64(k, salts_[0]);
  for (std::size_t i = 1; i < salts_.size(); ++i) {
    const std::uint64_t w = mix64(k, salts_[i]);
    if (w > best || (w == best && registry_.at(labels_[i]) < registry_.at(labels_[at]))) {
      best = w;
      at = i;
    }
  }
  return labels_[at];
}

Label Hrw::add_resource(const ResourceId& id) {
  const Label label = registry_.insert(id);
  salts_.push_back(hash_bytes(id.str()) ^ seed_);
  labels_.push_back(label);
  last_update_ops_ = 1;
  return label;
}

void Hrw::remove_resource(const ResourceId& id) {
  const Label label = registry_.erase(id);
  const auto i = static_cast<std::size_t>(std::find(labels_.begin(), labels_.end(), label) - labels_.begin());
  last_update_ops_ = labels_.size() - i;
  salts_.erase(salts_.begin() + static_cast<std::ptrdiff_t>(i));
  labels_.erase(labels_.begin() + static_cast<std::ptrdiff_t>(i));
}

// ----------------------------------------------------------------- Ring

Ring::Ring(std::span<const ResourceId> resources, std::uint32_t copies, std::uint64_t seed)
    : copies_(copies), seed_(seed) {
  if (copies == 0) throw ConfigError("ring: copies must be positive");
  if (resources.empty()) throw ContractViolation("ring: need at least one resource");
  for (const auto& id : resources) {
    const Label label = registry_.insert(id);
    auto pts = make_points(id, label);
    points_.insert(points_.end(), pts.begin(), pts.end());
  }
  std::sort(points_.begin(), points_.end());
  rebuild_index();
}

void Ring::rebuild_index() {
  constexpr std::size_t slots = std::size_t{1} << kIndexBits;
  index_.assign(slots + 1, 0);
  std::size_t p = 0;
  for (std::size_t t = 0; t < slots; ++t) {
    while (p < points_.size() && (points_[p].position >> (64 - kIndexBits)) < t) ++p;
    index_[t] = static_cast<std::uint32_t>(p);
  }
  index_[slots] = static_cast<std::uint32_t>(points_.size());
}

std::vector<Ring::Point> Ring::make_points(const ResourceId& id, Label label) const {
  const std::uint64_t rh = hash_bytes(id.str()) ^ seed_;
  std::vector<Point> pts(copies_);
  for (std::uint32_t i = 0; i < copies_; ++i) {
    pts[i] = {mix64(rh, i), label};
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::uint64_t Ring::key_position(Key k) const noexcept { return mix64(k, seed_ ^ kRingKeySalt); }

Label Ring::lookup(Key k) const {
  // The index narrows the search to points sharing the key's top bits.
  const std::uint64_t pos = key_position(k);
  const std::size_t t = pos >> (64 - kIndexBits);
  const Point* hit = points_.data() + index_[t];
  const Point* end = points_.data() + index_[t + 1];
  while (hit != end && hit->position < pos) ++hit;
  return hit == points_.data() + points_.size() ? points_.front().label : hit->label;
}

Label Ring::add_resource(const ResourceId& id) {
  const Label label = registry_.insert(id);
  const auto pts = make_points(id, label);
  const auto mid = static_cast<std::ptrdiff_t>(points_.size());
  points_.insert(points_.end(), pts.begin(), pts.end());
  std::inplace_merge(points_.begin(), points_.begin() + mid, points_.end());
  rebuild_index();
  last_update_ops_ = points_.size();
  return label;
}

void Ring::remove_resource(const ResourceId& id) {
  const Label label = registry_.erase(id);
  last_update_ops_ = points_.size();
  std::erase_if(points_, [&](const Point& p) { return p.label == label; });
  rebuild_index();
}

// --------------------------------------------------------------- Maglev

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t smallest_prime_at_least(std::uint64_t n) noexcept {
  while (!is_prime(n)) ++n;
  return n;
}

Maglev::Maglev(std::span<const ResourceId> resources, std::uint64_t table_size, std::uint64_t seed)
    : seed_(seed), table_(table_size) {
  if (!is_prime(table_size)) {
    throw ConfigError("maglev: table size " + std::to_string(table_size) + " is not prime");
  }
  if (resources.empty()) throw ContractViolation("maglev: need at least one resource");
  check_size(resources.size());
  for (const auto& id : resources) {
    members_.push_back(make_member(id, registry_.insert(id)));
  }
  populate();
}

void Maglev::check_size(std::size_t resources) const {
  if (table_.size() < 100 * resources) {
    throw ConfigError("maglev: table size " + std::to_string(table_.size()) + " below 100 x " +
                      std::to_string(resources) + " resources");
  }
}

Maglev::Member Maglev::make_member(const ResourceId& id, Label label) const {
  const std::uint64_t m = table_.size();
  const std::uint64_t rh = hash_bytes(id.str());
  return {label, mix64(rh, seed_ ^ kOffsetSalt) % m, mix64(rh, seed_ ^ kSkipSalt) % (m - 1) + 1};
}

void Maglev::populate() {
  const std::uint64_t m = table_.size();
  constexpr Label kEmpty = std::numeric_limits<Label>::max();
  std::fill(table_.begin(), table_.end(), kEmpty);
  std::uint64_t ops = m;

  // Current position of each member in its own permutation.
  std::vector<std::uint64_t> cursor(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) cursor[i] = members_[i].offset;

  std::uint64_t filled = 0;
  while (true) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      std::uint64_t c = cursor[i];
      while (table_[c] != kEmpty) {
        c += members_[i].skip;
        if (c >= m) c -= m;
        ++ops;
      }
      table_[c] = members_[i].label;
      ++ops;
      c += members_[i].skip;
      if (c >= m) c -= m;
      cursor[i] = c;
      if (++filled == m) {
        last_update_ops_ = ops;
        return;
      }
    }
  }
}

Label Maglev::lookup(Key k) const { return table_[mix64(k, seed_ ^ kMaglevKeySalt) % table_.size()]; }

Label Maglev::add_resource(const ResourceId& id) {
  check_size(members_.size() + 1);
  members_.push_back(make_member(id, registry_.insert(id)));
  populate();
  return members_.back().label;
}

void Maglev::remove_resource(const ResourceId& id) {
  const Label label = registry_.erase(id);
  std::erase_if(members_, [&](const Member& mb) { return mb.label == label; });
  populate();
}

}  // namespace anchorhash
