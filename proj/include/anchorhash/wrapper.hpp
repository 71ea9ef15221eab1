#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anchorhash/anchor.hpp"
#include "anchorhash/errors.hpp"
#include "anchorhash/reference.hpp"
#include "anchorhash/resource.hpp"
#include "anchorhash/snapshot.hpp"

namespace anchorhash {

struct WrapperSnapshot {
  AnchorSnapshot anchor;
  std::vector<std::pair<BucketId, std::string>> pairs;  // sorted by bucket

  bool operator==(const WrapperSnapshot&) const = default;
};

// "AHWR" u32:version u32:len anchor-snapshot-bytes u32:count
// (u32 bucket, u8 len, bytes)* u32:crc32
std::string encode_wrapper_snapshot(const WrapperSnapshot& snap);
WrapperSnapshot decode_wrapper_snapshot(std::string_view bytes);

/// Key -> resource mapping: an AnchorHash tier for key -> bucket plus a
/// bucket <-> resource bijection. Resources are attached to buckets in the
/// order given at construction; later additions take whichever bucket the
/// anchor hands back (always the most recently removed one), so a resource
/// added after a removal inherits exactly the keys the removed one held.
///
/// Same concurrency contract as the anchor: get_resource is read-only,
/// add/remove need exclusive access.
template <AnchorTier AnchorT = AnchorHash>
class ResourceWrapper {
 public:
  ResourceWrapper(std::uint32_t capacity, std::span<const ResourceId> resources,
                  std::uint64_t seed = 0)
      : anchor_(make_anchor(capacity, resources, seed)), forward_(capacity) {
    for (std::uint32_t i = 0; i < resources.size(); ++i) {
      if (!backward_.emplace(resources[i], i).second) {
        throw DuplicateResource("init_wrapper: duplicate resource '" + resources[i].str() + "'");
      }
      forward_[i] = resources[i];
    }
  }

  const ResourceId& get_resource(Key k) const noexcept { return *forward_[anchor_.get_bucket(k)]; }

  BucketId get_bucket(Key k) const noexcept { return anchor_.get_bucket(k); }

  /// Throws DuplicateResource or CapacityExhausted.
  BucketId add_resource(const ResourceId& id) {
    if (backward_.contains(id)) {
      throw DuplicateResource("add_resource: '" + id.str() + "' is already live");
    }
    const BucketId b = anchor_.add_bucket();
    forward_[b] = id;
    backward_.emplace(id, b);
    return b;
  }

  /// Throws UnknownResource or LastResourceError.
  void remove_resource(const ResourceId& id) {
    const auto it = backward_.find(id);
    if (it == backward_.end()) {
      throw UnknownResource("remove_resource: '" + id.str() + "' is not live");
    }
    if (backward_.size() == 1) {
      throw LastResourceError("remove_resource: '" + id.str() + "' is the last resource");
    }
    const BucketId b = it->second;
    anchor_.remove_bucket(b);
    backward_.erase(it);
    forward_[b].reset();
  }

  bool contains(const ResourceId& id) const { return backward_.contains(id); }

  BucketId bucket_of(const ResourceId& id) const {
    const auto it = backward_.find(id);
    if (it == backward_.end()) throw UnknownResource("'" + id.str() + "' is not live");
    return it->second;
  }

  // nullptr when b is not working.
  const ResourceId* resource_at(BucketId b) const noexcept {
    return b < forward_.size() && forward_[b] ? &*forward_[b] : nullptr;
  }

  std::size_t size() const noexcept { return backward_.size(); }
  std::uint32_t capacity() const noexcept { return anchor_.capacity(); }
  const AnchorT& anchor() const noexcept { return anchor_; }

  // (bucket, resource) pairs sorted by bucket.
  std::vector<std::pair<BucketId, ResourceId>> pairs() const {
    std::vector<std::pair<BucketId, ResourceId>> out;
    for (BucketId b = 0; b < forward_.size(); ++b) {
      if (forward_[b]) out.emplace_back(b, *forward_[b]);
    }
    return out;
  }

  // Throws IntegrityError unless forward/backward are inverse and cover
  // exactly the anchor's working set.
  void validate() const {
    anchor_.validate();
    std::size_t live = 0;
    for (BucketId b = 0; b < forward_.size(); ++b) {
      if (static_cast<bool>(forward_[b]) != anchor_.is_working(b)) {
        throw IntegrityError("wrapper: bucket " + std::to_string(b) +
                             " mapping disagrees with the working set");
      }
      if (!forward_[b]) continue;
      ++live;
      const auto it = backward_.find(*forward_[b]);
      if (it == backward_.end() || it->second != b) {
        throw IntegrityError("wrapper: backward map is not the inverse at bucket " + std::to_string(b));
      }
    }
    if (live != backward_.size()) throw IntegrityError("wrapper: backward map has stale entries");
  }

  WrapperSnapshot to_snapshot() const {
    WrapperSnapshot snap{anchor_.to_snapshot(), {}};
    for (auto& [b, id] : pairs()) snap.pairs.emplace_back(b, id.str());
    return snap;
  }

  static ResourceWrapper from_snapshot(const WrapperSnapshot& snap) {
    ResourceWrapper out(AnchorT::from_snapshot(snap.anchor));
    for (const auto& [b, name] : snap.pairs) {
      if (b >= out.forward_.size() || out.forward_[b]) {
        throw IntegrityError("wrapper snapshot: bad or repeated bucket " + std::to_string(b));
      }
      ResourceId id = [&] {
        try {
          return ResourceId(name);
        } catch (const ContractViolation& e) {
          throw IntegrityError(std::string("wrapper snapshot: ") + e.what());
        }
      }();
      if (!out.backward_.emplace(id, b).second) {
        throw IntegrityError("wrapper snapshot: duplicate resource '" + name + "'");
      }
      out.forward_[b] = std::move(id);
    }
    out.validate();
    return out;
  }

 private:
  explicit ResourceWrapper(AnchorT anchor)
      : anchor_(std::move(anchor)), forward_(anchor_.capacity()) {}

  static AnchorT make_anchor(std::uint32_t capacity, std::span<const ResourceId> resources,
                             std::uint64_t seed) {
    if (resources.empty()) throw ContractViolation("init_wrapper: need at least one resource");
    if (resources.size() > capacity) {
      throw CapacityExhausted("init_wrapper: " + std::to_string(resources.size()) +
                              " resources exceed anchor capacity " + std::to_string(capacity));
    }
    return AnchorT(capacity, static_cast<std::uint32_t>(resources.size()), seed);
  }

  AnchorT anchor_;
  std::vector<std::optional<ResourceId>> forward_;
  std::unordered_map<ResourceId, BucketId, ResourceIdHash> backward_;
};

}  // namespace anchorhash
