#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "anchorhash/balancer.hpp"
#include "anchorhash/resource.hpp"

namespace anchorhash {

namespace detail {

// Label bookkeeping shared by the baselines.
class ResourceRegistry {
 public:
  Label insert(const ResourceId& id);  // throws DuplicateResource
  Label erase(const ResourceId& id);   // throws UnknownResource / LastResourceError
  Label find(const ResourceId& id) const;
  bool contains(const ResourceId& id) const { return labels_.contains(id); }
  const ResourceId& at(Label label) const;
  Label bound() const noexcept { return static_cast<Label>(by_label_.size()); }
  std::size_t size() const noexcept { return labels_.size(); }
  std::vector<Label> live() const;

 private:
  std::vector<std::optional<ResourceId>> by_label_;
  std::unordered_map<ResourceId, Label, ResourceIdHash> labels_;
};

}  // namespace detail

/// Highest random weight (rendezvous) hashing: a key goes to the resource
/// maximizing mix64(key, resource salt). Ties go to the smaller resource id.
class Hrw final : public Balancer {
 public:
  Hrw(std::span<const ResourceId> resources, std::uint64_t seed = 0);

  const ResourceId& get(Key k) const { return registry_.at(lookup(k)); }

  std::string name() const override { return "hrw"; }
  Label lookup(Key k) const override;
  Label label_bound() const override { return registry_.bound(); }
  std::vector<Label> live_labels() const override { return registry_.live(); }
  const ResourceId& resource(Label label) const override { return registry_.at(label); }
  Label label_of(const ResourceId& id) const override { return registry_.find(id); }
  bool contains(const ResourceId& id) const override { return registry_.contains(id); }
  Label add_resource(const ResourceId& id) override;
  void remove_resource(const ResourceId& id) override;
  std::size_t size() const override { return registry_.size(); }
  std::uint64_t last_update_ops() const override { return last_update_ops_; }

 private:
  Label lookup_with_ties(Key k) const;

  std::uint64_t seed_;
  detail::ResourceRegistry registry_;
  // Parallel arrays so the weight scan stays branch-free.
  std::vector<Salt> salts_;
  std::vector<Label> labels_;
  std::uint64_t last_update_ops_ = 0;
};

/// Consistent hashing ring with `copies` virtual nodes per resource. A key
/// belongs to the first point at or after its position, wrapping around.
class Ring final : public Balancer {
 public:
  struct Point {
    std::uint64_t position;
    Label label;
    auto operator<=>(const Point&) const = default;
  };

  Ring(std::span<const ResourceId> resources, std::uint32_t copies, std::uint64_t seed = 0);

  const ResourceId& get(Key k) const { return registry_.at(lookup(k)); }
  std::uint64_t key_position(Key k) const noexcept;
  std::span<const Point> points() const noexcept { return points_; }
  std::uint32_t copies() const noexcept { return copies_; }

  std::string name() const override { return "ring"; }
  Label lookup(Key k) const override;
  Label label_bound() const override { return registry_.bound(); }
  std::vector<Label> live_labels() const override { return registry_.live(); }
  const ResourceId& resource(Label label) const override { return registry_.at(label); }
  Label label_of(const ResourceId& id) const override { return registry_.find(id); }
  bool contains(const ResourceId& id) const override { return registry_.contains(id); }
  Label add_resource(const ResourceId& id) override;
  void remove_resource(const ResourceId& id) override;
  std::size_t size() const override { return registry_.size(); }
  std::uint64_t last_update_ops() const override { return last_update_ops_; }

 private:
  std::vector<Point> make_points(const ResourceId& id, Label label) const;
  void rebuild_index();

  // index_[t] = first point whose position's top kIndexBits bits are >= t.
  static constexpr unsigned kIndexBits = 16;

  std::uint32_t copies_;
  std::uint64_t seed_;
  detail::ResourceRegistry registry_;
  std::vector<Point> points_;
  std::vector<std::uint32_t> index_;
  std::uint64_t last_update_ops_ = 0;
};

/// Maglev lookup table of prime size m. Each resource walks its own
/// permutation (offset + j*skip) mod m and the resources take turns
/// claiming the next free slot until the table is full. Any add or remove
/// repopulates the whole table.
class Maglev final : public Balancer {
 public:
  // Throws ConfigError unless m is prime and m >= 100 * |resources|.
  Maglev(std::span<const ResourceId> resources, std::uint64_t table_size, std::uint64_t seed = 0);

  const ResourceId& get(Key k) const { return registry_.at(lookup(k)); }
  std::uint64_t table_size() const noexcept { return table_.size(); }
  std::span<const Label> table() const noexcept { return table_; }

  std::string name() const override { return "maglev"; }
  Label lookup(Key k) const override;
  Label label_bound() const override { return registry_.bound(); }
  std::vector<Label> live_labels() const override { return registry_.live(); }
  const ResourceId& resource(Label label) const override { return registry_.at(label); }
  Label label_of(const ResourceId& id) const override { return registry_.find(id); }
  bool contains(const ResourceId& id) const override { return registry_.contains(id); }
  Label add_resource(const ResourceId& id) override;
  void remove_resource(const ResourceId& id) override;
  std::size_t size() const override { return registry_.size(); }
  std::uint64_t last_update_ops() const override { return last_update_ops_; }

 private:
  struct Member {
    Label label;
    std::uint64_t offset;
    std::uint64_t skip;
  };
  Member make_member(const ResourceId& id, Label label) const;
  void check_size(std::size_t resources) const;
  void populate();

  std::uint64_t seed_;
  detail::ResourceRegistry registry_;
  std::vector<Member> members_;  // insertion order; fixes who claims first
  std::vector<Label> table_;
  std::uint64_t last_update_ops_ = 0;
};

bool is_prime(std::uint64_t n) noexcept;
std::uint64_t smallest_prime_at_least(std::uint64_t n) noexcept;

}  // namespace anchorhash
