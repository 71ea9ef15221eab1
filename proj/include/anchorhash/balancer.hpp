#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "anchorhash/resource.hpp"
#include "anchorhash/types.hpp"

namespace anchorhash {

// Compact per-resource tag returned by lookups, dense in [0, label_bound()).
// Anchor-based balancers use the bucket id; baselines hand out a fresh label
// per added resource and never reuse it.
using Label = std::uint32_t;

// Common key -> resource interface used by the evaluation harness and CLI.
// Lookups are const and safe to run concurrently; add/remove need
// exclusive access.
class Balancer {
 public:
  virtual ~Balancer() = default;

  virtual std::string name() const = 0;
  virtual Label lookup(Key k) const = 0;
  virtual Label label_bound() const = 0;
  // Labels of live resources, ascending.
  virtual std::vector<Label> live_labels() const = 0;
  virtual const ResourceId& resource(Label label) const = 0;
  virtual Label label_of(const ResourceId& id) const = 0;
  virtual bool contains(const ResourceId& id) const = 0;
  virtual Label add_resource(const ResourceId& id) = 0;
  virtual void remove_resource(const ResourceId& id) = 0;
  virtual std::size_t size() const = 0;
  // Mutating primitive operations performed by the last add/remove.
  virtual std::uint64_t last_update_ops() const = 0;

  // Lookup with hash-op and memory-access counts. Only anchor-based
  // balancers record traces.
  virtual std::optional<TracedBucket> lookup_traced(Key) const { return std::nullopt; }
  // Full state as JSON. The default lists live resources by label.
  virtual nlohmann::json state_json() const;
  // Binary snapshot, for balancers that support one.
  virtual std::optional<std::string> encoded_state() const { return std::nullopt; }
};

struct BalancerConfig {
  std::string algo = "anchor";  // anchor | hrw | ring | maglev
  Tier tier = Tier::kMinimal;   // anchor only
  std::uint32_t capacity = 0;   // anchor size; upper bound on live resources
  std::uint32_t copies = 100;   // ring virtual nodes per resource
  std::uint64_t table_size = 0; // maglev; 0 = smallest prime >= 100 * capacity
  std::uint64_t seed = 0;
};

// Throws ConfigError for unknown algorithms or bad parameters.
std::unique_ptr<Balancer> make_balancer(const BalancerConfig& config,
                                        std::span<const ResourceId> initial);

// Rebuilds an anchor balancer from a wrapper snapshot. Throws TierMismatch
// if the snapshot was written by a different tier.
struct WrapperSnapshot;
std::unique_ptr<Balancer> restore_balancer(const WrapperSnapshot& snap, Tier tier);

// "0", "1", ..., "n-1".
std::vector<ResourceId> numbered_resources(std::uint32_t count);

}  // namespace anchorhash
