#include <gtest/gtest.h>

#include <array>
#include <unordered_set>

#include "anchorhash/evaluation.hpp"
#include "anchorhash/hashing.hpp"
#include "test_support.hpp"

namespace ah = anchorhash;

TEST(Hashing, MatchesGoldenFile) {
  const auto rows = ah::testing::load_golden(ANCHORHASH_TEST_DATA "/hashing_golden.csv");
  ASSERT_EQ(rows.size(), 100u);
  for (const auto& r : rows) {
    EXPECT_EQ(ah::hash_to_range(r.key, r.salt, r.range), r.output) << r.key << "," << r.salt << "," << r.range;
  }
}

TEST(Hashing, ZeroInputsGiveZero) {
  static_assert(ah::mix64(0, 0) == 0);
  EXPECT_EQ(ah::hash_to_range(0, 0, 7), 0u);
}

TEST(Hashing, RangeOneAlwaysZero) {
  for (ah::Key k = 0; k < 1000; ++k) EXPECT_EQ(ah::hash_to_range(k * 0x9E3779B97F4A7C15ULL, k, 1), 0u);
}

TEST(Hashing, RangeZeroIsContractViolation) {
  EXPECT_THROW(ah::hash_to_range(1, 2, 0), ah::ContractViolation);
}

TEST(Hashing, DifferentSaltsDisagreeAlmostEverywhere) {
  const auto keys = ah::make_keys(1'000'000, 5);
  std::size_t differ = 0;
  for (const auto k : keys) differ += ah::mix64(k, 1) != ah::mix64(k, 2);
  EXPECT_GE(static_cast<double>(differ) / keys.size(), 0.999);
}

TEST(Hashing, UniformOverRange) {
  const auto keys = ah::make_keys(1'000'000, 6);
  std::vector<std::uint64_t> counts(1000, 0);
  for (const auto k : keys) ++counts[ah::hash_to_range(k, 42, counts.size())];
  EXPECT_FALSE(ah::chi_square_uniform(counts).rejects(0.001));
}

TEST(Hashing, OutputsUnderDistinctSaltsIndependent) {
  const auto keys = ah::make_keys(1'000'000, 7);
  constexpr std::size_t kCells = 16;
  std::vector<std::uint64_t> table(kCells * kCells, 0);
  for (const auto k : keys) {
    ++table[ah::hash_to_range(k, ah::bucket_salt(0, 3), kCells) * kCells +
            ah::hash_to_range(k, ah::bucket_salt(0, 4), kCells)];
  }
  EXPECT_FALSE(ah::chi_square_independence(table, kCells, kCells).rejects(0.001));
}

TEST(Hashing, TopLevelSaltUnreachableByBuckets) {
  for (std::uint32_t b : {0u, 1u, 0xFFFFFFFFu}) {
    EXPECT_NE(ah::bucket_salt(9, b), ah::top_level_salt(9));
  }
}

TEST(Hashing, BytesDigestDependsOnLengthAndContent) {
  std::unordered_set<std::uint64_t> seen;
  for (const std::string& s : {std::string(), std::string(1, '\0'), std::string(2, '\0'), std::string("a"), std::string("b"),
                              std::string("abcdefgh"), std::string("abcdefghi"), std::string("abcdefgi")}) {
    EXPECT_TRUE(seen.insert(ah::hash_bytes(s)).second) << s;
  }
  EXPECT_EQ(ah::hash_bytes("server-17"), ah::hash_bytes("server-17"));
}

TEST(Hashing, KeyStreamDeterministic) {
  EXPECT_EQ(ah::make_keys(1000, 11), ah::make_keys(1000, 11));
  EXPECT_NE(ah::make_keys(1000, 11), ah::make_keys(1000, 12));
  const auto keys = ah::make_keys(100'000, 11);
  EXPECT_EQ(std::unordered_set<ah::Key>(keys.begin(), keys.end()).size(), keys.size());
}
