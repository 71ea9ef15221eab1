#include "anchorhash/balancer.hpp"

#include <nlohmann/json.hpp>
#include <string>

#include "anchorhash/snapshot.hpp"

#include "anchorhash/baselines.hpp"
#include "anchorhash/errors.hpp"
#include "anchorhash/wrapper.hpp"

namespace anchorhash {

namespace {

template <AnchorTier AnchorT>
class AnchorBalancer final : public Balancer {
 public:
  AnchorBalancer(std::uint32_t capacity, std::span<const ResourceId> initial, std::uint64_t seed)
      : wrapper_(capacity, initial, seed) {}
  explicit AnchorBalancer(ResourceWrapper<AnchorT> wrapper) : wrapper_(std::move(wrapper)) {}

  std::string name() const override {
    return AnchorT::kTier == Tier::kMinimal ? "anchor" : "anchor-" + std::string(tier_name(AnchorT::kTier));
  }
  Label lookup(Key k) const override { return wrapper_.get_bucket(k); }
  Label label_bound() const override { return wrapper_.capacity(); }
  std::vector<Label> live_labels() const override { return wrapper_.anchor().working_set(); }
  const ResourceId& resource(Label label) const override {
    const ResourceId* id = wrapper_.resource_at(label);
    if (id == nullptr) throw ContractViolation("bucket " + std::to_string(label) + " is not working");
    return *id;
  }
  Label label_of(const ResourceId& id) const override { return wrapper_.bucket_of(id); }
  bool contains(const ResourceId& id) const override { return wrapper_.contains(id); }
  Label add_resource(const ResourceId& id) override { return wrapper_.add_resource(id); }
  void remove_resource(const ResourceId& id) override { wrapper_.remove_resource(id); }
  std::size_t size() const override { return wrapper_.size(); }
  std::uint64_t last_update_ops() const override { return wrapper_.anchor().last_update_ops(); }

  std::optional<TracedBucket> lookup_traced(Key k) const override {
    return wrapper_.anchor().get_bucket_traced(k);
  }
  nlohmann::json state_json() const override {
    const auto snap = wrapper_.to_snapshot();
    nlohmann::json j = snapshot_to_json(snap.anchor);
    auto& pairs = j["resources"] = nlohmann::json::array();
    for (const auto& [b, name] : snap.pairs) pairs.push_back({b, name});
    return j;
  }
  std::optional<std::string> encoded_state() const override {
    return encode_wrapper_snapshot(wrapper_.to_snapshot());
  }

 private:
  ResourceWrapper<AnchorT> wrapper_;
};

}  // namespace

std::unique_ptr<Balancer> make_balancer(const BalancerConfig& config,
                                        std::span<const ResourceId> initial) {
  if (config.algo == "anchor") {
    if (config.capacity == 0) throw ConfigError("anchor: capacity must be positive");
    switch (config.tier) {
      case Tier::kMinimal:
        return std::make_unique<AnchorBalancer<AnchorHash>>(config.capacity, initial, config.seed);
      case Tier::kReduced:
        return std::make_unique<AnchorBalancer<ReducedAnchor>>(config.capacity, initial, config.seed);
      case Tier::kNaive:
        return std::make_unique<AnchorBalancer<NaiveAnchor>>(config.capacity, initial, config.seed);
    }
  }
  if (config.algo == "hrw") return std::make_unique<Hrw>(initial, config.seed);
  if (config.algo == "ring") return std::make_unique<Ring>(initial, config.copies, config.seed);
  if (config.algo == "maglev") {
    std::uint64_t m = config.table_size;
    if (m == 0) {
      const std::uint64_t bound = std::max<std::uint64_t>(config.capacity, initial.size());
      m = smallest_prime_at_least(100 * bound);
    }
    return std::make_unique<Maglev>(initial, m, config.seed);
  }
  throw ConfigError("unknown algorithm '" + config.algo + "'");
}

nlohmann::json Balancer::state_json() const {
  nlohmann::json resources = nlohmann::json::array();
  for (const Label l : live_labels()) resources.push_back({l, resource(l).str()});
  return {{"algorithm", name()}, {"resources", std::move(resources)}};
}

std::unique_ptr<Balancer> restore_balancer(const WrapperSnapshot& snap, Tier tier) {
  switch (tier) {
    case Tier::kMinimal:
      return std::make_unique<AnchorBalancer<AnchorHash>>(ResourceWrapper<AnchorHash>::from_snapshot(snap));
    case Tier::kReduced:
      return std::make_unique<AnchorBalancer<ReducedAnchor>>(
          ResourceWrapper<ReducedAnchor>::from_snapshot(snap));
    case Tier::kNaive:
      return std::make_unique<AnchorBalancer<NaiveAnchor>>(ResourceWrapper<NaiveAnchor>::from_snapshot(snap));
  }
  throw ConfigError("unknown tier");
}

std::vector<ResourceId> numbered_resources(std::uint32_t count) {
  std::vector<ResourceId> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.emplace_back(std::to_string(i));
  return out;
}

}  // namespace anchorhash
