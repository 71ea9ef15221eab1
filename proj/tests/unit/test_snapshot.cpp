#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <nlohmann/json.hpp>

#include "anchorhash/anchor.hpp"
#include "anchorhash/evaluation.hpp"
#include "anchorhash/kernels.hpp"
#include "anchorhash/reference.hpp"
#include "anchorhash/snapshot.hpp"

namespace ah = anchorhash;
namespace fs = std::filesystem;

namespace {

template <class T>
T churned() {
  auto anchor = ah::build_anchor<T>(300, 120, 21, ah::RemovalPattern::kRandom, 22);
  for (int i = 0; i < 15; ++i) anchor.add_bucket();
  return anchor;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("anchorhash_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

template <class T>
class SnapshotTiers : public ::testing::Test {};
using TierTypes = ::testing::Types<ah::AnchorHash, ah::ReducedAnchor, ah::NaiveAnchor>;
TYPED_TEST_SUITE(SnapshotTiers, TierTypes);

TYPED_TEST(SnapshotTiers, RoundTripPreservesLookups) {
  const auto anchor = churned<TypeParam>();
  const auto bytes = ah::encode_snapshot(anchor.to_snapshot());
  const auto decoded = ah::decode_snapshot(bytes);
  EXPECT_EQ(decoded, anchor.to_snapshot());
  const auto back = TypeParam::from_snapshot(decoded);
  const auto keys = ah::make_keys(10'000, 23);
  EXPECT_EQ(ah::map_buckets(back, keys), ah::map_buckets(anchor, keys));
  EXPECT_EQ(ah::encode_snapshot(back.to_snapshot()), bytes);
}

TYPED_TEST(SnapshotTiers, SaveLoadSaveIsByteIdentical) {
  const auto first = temp_path("first.bin");
  const auto second = temp_path("second.bin");
  ah::save_snapshot(first, churned<TypeParam>().to_snapshot());
  const auto loaded = TypeParam::from_snapshot(ah::load_snapshot(first));
  ah::save_snapshot(second, loaded.to_snapshot());
  EXPECT_EQ(ah::read_file(first), ah::read_file(second));
  fs::remove(first);
  fs::remove(second);
}

TEST(Snapshot, TruncationIsIntegrityError) {
  const auto bytes = ah::encode_snapshot(churned<ah::AnchorHash>().to_snapshot());
  for (std::size_t len = 0; len < bytes.size(); len += 1 + len / 3) {
    EXPECT_THROW(ah::decode_snapshot(std::string_view(bytes).substr(0, len)), ah::IntegrityError) << len;
  }
  EXPECT_THROW(ah::decode_snapshot(bytes + "x"), ah::IntegrityError);
}

TEST(Snapshot, CorruptionIsIntegrityError) {
  const auto bytes = ah::encode_snapshot(churned<ah::ReducedAnchor>().to_snapshot());
  for (std::size_t pos = 0; pos < bytes.size(); pos += 37) {
    std::string bad = bytes;
    bad[pos] = static_cast<char>(bad[pos] ^ 0x10);
    EXPECT_THROW(ah::decode_snapshot(bad), ah::IntegrityError) << pos;
  }
}

TEST(Snapshot, ConsistentChecksumButBrokenInvariantRejected) {
  auto snap = churned<ah::AnchorHash>().to_snapshot();
  std::swap(snap.W[0], snap.W[1]);  // L is no longer the inverse of W
  const auto decoded = ah::decode_snapshot(ah::encode_snapshot(snap));
  EXPECT_THROW(ah::AnchorHash::from_snapshot(decoded), ah::IntegrityError);
}

TEST(Snapshot, TierMismatch) {
  const auto naive = ah::decode_snapshot(ah::encode_snapshot(churned<ah::NaiveAnchor>().to_snapshot()));
  EXPECT_THROW(ah::AnchorHash::from_snapshot(naive), ah::TierMismatch);
  EXPECT_THROW(ah::ReducedAnchor::from_snapshot(naive), ah::TierMismatch);
  const auto minimal = churned<ah::AnchorHash>().to_snapshot();
  EXPECT_THROW(ah::NaiveAnchor::from_snapshot(minimal), ah::TierMismatch);
}

TEST(Snapshot, JsonView) {
  ah::AnchorHash anchor(7, 7, 5);
  for (ah::BucketId b : {6u, 5u, 1u}) anchor.remove_bucket(b);
  const auto j = ah::snapshot_to_json(anchor.to_snapshot());
  EXPECT_EQ(j["A"], nlohmann::json({0, 4, 0, 0, 0, 5, 6}));
  EXPECT_EQ(j["R"], nlohmann::json({6, 5, 1}));
  EXPECT_EQ(j["N"], 4);
  EXPECT_EQ(j["capacity_a"], 7);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["tier"], "minimal");
}

TEST(Snapshot, MissingFile) {
  EXPECT_THROW(ah::load_snapshot(temp_path("does_not_exist")), ah::Error);
}
