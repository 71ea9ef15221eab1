#include <gtest/gtest.h>

#include <map>

#include "anchorhash/hashing.hpp"
#include "anchorhash/reference.hpp"
#include "anchorhash/wrapper.hpp"

namespace ah = anchorhash;

namespace {

std::vector<ah::ResourceId> ids(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

}  // namespace

TEST(ResourceId, LengthLimits) {
  EXPECT_THROW(ah::ResourceId(""), ah::ContractViolation);
  EXPECT_THROW(ah::ResourceId(std::string(256, 'x')), ah::ContractViolation);
  EXPECT_EQ(ah::ResourceId(std::string(255, 'x')).str().size(), 255u);
  EXPECT_LT(ah::ResourceId("a"), ah::ResourceId("b"));
}

TEST(Wrapper, AttachesResourcesInOrder) {
  ah::ResourceWrapper<> w(8, ids({"s0", "s1", "s2"}));
  EXPECT_EQ(w.bucket_of(ah::ResourceId("s2")), 2u);
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.capacity(), 8u);
  EXPECT_EQ(w.resource_at(5), nullptr);
  for (const auto k : ah::make_keys(1000, 1)) {
    EXPECT_EQ(w.get_resource(k), *w.resource_at(w.get_bucket(k)));
  }
  w.validate();
}

TEST(Wrapper, ConstructionErrors) {
  EXPECT_THROW(ah::ResourceWrapper<>(4, ids({"a", "a"})), ah::DuplicateResource);
  EXPECT_THROW(ah::ResourceWrapper<>(2, ids({"a", "b", "c"})), ah::CapacityExhausted);
  EXPECT_THROW(ah::ResourceWrapper<>(2, std::vector<ah::ResourceId>{}), ah::ContractViolation);
}

TEST(Wrapper, ChurnErrors) {
  ah::ResourceWrapper<> w(3, ids({"a", "b"}));
  EXPECT_THROW(w.add_resource(ah::ResourceId("a")), ah::DuplicateResource);
  EXPECT_THROW(w.remove_resource(ah::ResourceId("zz")), ah::UnknownResource);
  w.add_resource(ah::ResourceId("c"));
  EXPECT_THROW(w.add_resource(ah::ResourceId("d")), ah::CapacityExhausted);
  w.remove_resource(ah::ResourceId("a"));
  w.remove_resource(ah::ResourceId("b"));
  EXPECT_THROW(w.remove_resource(ah::ResourceId("c")), ah::LastResourceError);
  EXPECT_THROW(static_cast<void>(w.bucket_of(ah::ResourceId("a"))), ah::UnknownResource);
  w.validate();
}

TEST(Wrapper, ReplacementInheritsKeys) {
  ah::ResourceWrapper<> w(16, ids({"a", "b", "c", "d", "e"}));
  const auto keys = ah::make_keys(20'000, 2);
  std::vector<std::string> before;
  for (const auto k : keys) before.push_back(w.get_resource(k).str());
  w.remove_resource(ah::ResourceId("c"));
  const auto b = w.add_resource(ah::ResourceId("fresh"));
  EXPECT_EQ(b, 2u);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& now = w.get_resource(keys[i]).str();
    EXPECT_EQ(now, before[i] == "c" ? "fresh" : before[i]);
  }
  w.validate();
}

TEST(Wrapper, RemovalMovesOnlyRemovedResourcesKeys) {
  ah::ResourceWrapper<ah::ReducedAnchor> w(10, ids({"a", "b", "c", "d", "e", "f"}));
  const auto keys = ah::make_keys(20'000, 3);
  std::vector<std::string> before;
  for (const auto k : keys) before.push_back(w.get_resource(k).str());
  w.remove_resource(ah::ResourceId("d"));
  std::map<std::string, int> gained;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& now = w.get_resource(keys[i]).str();
    if (before[i] == "d") {
      EXPECT_NE(now, "d");
      ++gained[now];
    } else {
      EXPECT_EQ(now, before[i]);
    }
  }
  EXPECT_EQ(gained.size(), 5u);
}

TEST(Wrapper, SnapshotRoundTrip) {
  ah::ResourceWrapper<> w(12, ids({"alpha", "beta", "gamma", "delta"}), 99);
  w.remove_resource(ah::ResourceId("beta"));
  w.add_resource(ah::ResourceId("epsilon"));
  w.add_resource(ah::ResourceId("zeta"));
  const auto bytes = ah::encode_wrapper_snapshot(w.to_snapshot());
  const auto back = ah::ResourceWrapper<>::from_snapshot(ah::decode_wrapper_snapshot(bytes));
  EXPECT_EQ(ah::encode_wrapper_snapshot(back.to_snapshot()), bytes);
  for (const auto k : ah::make_keys(10'000, 4)) ASSERT_EQ(back.get_resource(k), w.get_resource(k));
  EXPECT_THROW(ah::ResourceWrapper<ah::NaiveAnchor>::from_snapshot(ah::decode_wrapper_snapshot(bytes)),
               ah::TierMismatch);
}
