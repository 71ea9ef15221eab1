#include <gtest/gtest.h>

#include <random>

#include "anchorhash/anchor.hpp"
#include "anchorhash/evaluation.hpp"
#include "anchorhash/kernels.hpp"
#include "test_support.hpp"

namespace ah = anchorhash;

namespace {

std::vector<std::uint32_t> vec(std::span<const std::uint32_t> s) { return {s.begin(), s.end()}; }

ah::AnchorHash seven_after(std::initializer_list<ah::BucketId> removals) {
  ah::AnchorHash anchor(7, 7);
  for (const auto b : removals) anchor.remove_bucket(b);
  return anchor;
}

// Random remove/add churn that keeps at least one bucket working.
template <class Fn>
void churn(ah::AnchorHash& anchor, std::mt19937_64& rng, int steps, Fn&& after_each) {
  for (int i = 0; i < steps; ++i) {
    const bool can_add = anchor.size() < anchor.capacity();
    const bool can_remove = anchor.size() > 1;
    if (!can_add && !can_remove) return;
    if (can_remove && (!can_add || rng() % 2 == 0)) {
      const auto live = anchor.working_set();
      anchor.remove_bucket(live[rng() % live.size()]);
    } else {
      anchor.add_bucket();
    }
    after_each();
  }
}

}  // namespace

TEST(Anchor, RepresentationAfterThreeRemovals) {
  const auto anchor = seven_after({6, 5, 1});
  EXPECT_EQ(vec(anchor.anchor_sizes()), (std::vector<std::uint32_t>{0, 4, 0, 0, 0, 5, 6}));
  EXPECT_EQ(anchor.size(), 4u);
  anchor.validate();
}

TEST(Anchor, SuccessorsAfterFiveRemovals) {
  const auto anchor = seven_after({6, 5, 1, 0, 4});
  EXPECT_EQ(vec(anchor.successors()), (std::vector<std::uint32_t>{3, 4, 2, 3, 2, 5, 6}));
  EXPECT_EQ(vec(anchor.anchor_sizes()), (std::vector<std::uint32_t>{3, 4, 0, 0, 2, 5, 6}));
  EXPECT_EQ(vec(anchor.removed()), (std::vector<std::uint32_t>{6, 5, 1, 0, 4}));
  EXPECT_EQ(anchor.working_set(), (std::vector<ah::BucketId>{2, 3}));
  anchor.validate();
}

TEST(Anchor, LookupWalksSuccessorChain) {
  // Key whose hashes are 5 over the anchor, then 1 in W_5, 1 in W_1, 1 in W_4.
  const auto anchor = seven_after({6, 5, 1, 0, 4});
  const auto top = ah::top_level_salt(0);
  ah::Key k = 0;
  while (!(ah::hash_to_range(k, top, 7) == 5 && ah::hash_to_range(k, ah::bucket_salt(0, 5), 5) == 1 &&
           ah::hash_to_range(k, ah::bucket_salt(0, 1), 4) == 1 &&
           ah::hash_to_range(k, ah::bucket_salt(0, 4), 2) == 1)) {
    ++k;
  }
  const auto traced = anchor.get_bucket_traced(k);
  EXPECT_EQ(anchor.get_bucket(k), 2u);
  EXPECT_EQ(traced.bucket, 2u);
  EXPECT_EQ(traced.trace.hash_ops, 4u);
  // 1 initial A read, 3 rehash reads, 3 successor hops.
  EXPECT_EQ(traced.trace.memory_accesses, 7u);
  EXPECT_EQ(traced.trace.array_reads, 10u);
}

TEST(Anchor, InitialUnusedBucketsComeBackInOrder) {
  ah::AnchorHash anchor(10, 6);
  EXPECT_EQ(anchor.working_set(), (std::vector<ah::BucketId>{0, 1, 2, 3, 4, 5}));
  for (ah::BucketId expect = 6; expect < 10; ++expect) {
    EXPECT_EQ(anchor.next_added_bucket(), expect);
    EXPECT_EQ(anchor.add_bucket(), expect);
  }
  EXPECT_THROW(anchor.add_bucket(), ah::CapacityExhausted);
  EXPECT_THROW(static_cast<void>(anchor.next_added_bucket()), ah::CapacityExhausted);
}

TEST(Anchor, ConstructorRejectsBadSizes) {
  EXPECT_THROW(ah::AnchorHash(0, 0), ah::ContractViolation);
  EXPECT_THROW(ah::AnchorHash(5, 0), ah::ContractViolation);
  EXPECT_THROW(ah::AnchorHash(5, 6), ah::ContractViolation);
}

TEST(Anchor, RemovalErrors) {
  ah::AnchorHash anchor(4, 2);
  EXPECT_THROW(anchor.remove_bucket(3), ah::InvalidRemoval);
  EXPECT_THROW(anchor.remove_bucket(4), ah::InvalidRemoval);
  anchor.remove_bucket(0);
  EXPECT_THROW(anchor.remove_bucket(0), ah::InvalidRemoval);
  EXPECT_THROW(anchor.remove_bucket(1), ah::LastBucketError);
  anchor.validate();
}

TEST(Anchor, UpdatesCostSixOps) {
  std::mt19937_64 rng(3);
  ah::AnchorHash anchor(50, 40);
  churn(anchor, rng, 500, [&] { EXPECT_EQ(anchor.last_update_ops(), 6u); });
}

TEST(Anchor, InvariantsHoldUnderChurn) {
  std::mt19937_64 rng(4);
  for (std::uint32_t a : {1u, 2u, 3u, 17u, 64u}) {
    ah::AnchorHash anchor(a, (a + 1) / 2);
    churn(anchor, rng, 400, [&] { EXPECT_NO_THROW(anchor.validate()); });
  }
}

TEST(Anchor, LookupsLandOnWorkingBuckets) {
  std::mt19937_64 rng(5);
  ah::AnchorHash anchor(64, 64);
  const auto keys = ah::make_keys(20'000, 5);
  churn(anchor, rng, 100, [&] {
    for (std::size_t i = 0; i < keys.size(); i += 7) {
      const auto b = anchor.get_bucket(keys[i]);
      ASSERT_TRUE(anchor.is_working(b));
      ASSERT_EQ(anchor.get_bucket_traced(keys[i]).bucket, b);
    }
  });
}

TEST(Anchor, RemovalOnlyMovesKeysOfRemovedBucket) {
  std::mt19937_64 rng(6);
  ah::AnchorHash anchor(40, 40);
  const auto keys = ah::make_keys(20'000, 6);
  for (int step = 0; step < 30; ++step) {
    const auto before = ah::map_buckets(anchor, keys);
    const auto live = anchor.working_set();
    const auto victim = live[rng() % live.size()];
    anchor.remove_bucket(victim);
    const auto after = ah::map_buckets(anchor, keys);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (before[i] == victim) {
        ASSERT_NE(after[i], victim);
      } else {
        ASSERT_EQ(after[i], before[i]);
      }
    }
  }
}

TEST(Anchor, AdditionOnlyMovesKeysOntoAddedBucket) {
  ah::AnchorHash anchor(40, 10);
  const auto keys = ah::make_keys(20'000, 7);
  while (anchor.size() < anchor.capacity()) {
    const auto before = ah::map_buckets(anchor, keys);
    const auto added = anchor.add_bucket();
    const auto after = ah::map_buckets(anchor, keys);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (after[i] != before[i]) {
        ASSERT_EQ(after[i], added);
        ++moved;
      }
    }
    EXPECT_GT(moved, 0u);
  }
}

TEST(Anchor, AddUndoesRemove) {
  std::mt19937_64 rng(8);
  ah::AnchorHash anchor(64, 50);
  const auto keys = ah::make_keys(10'000, 8);
  for (int i = 0; i < 100; ++i) {
    const auto before = ah::map_buckets(anchor, keys);
    const auto sizes = vec(anchor.anchor_sizes());
    const auto live = anchor.working_set();
    const auto b = live[rng() % live.size()];
    anchor.remove_bucket(b);
    EXPECT_EQ(anchor.add_bucket(), b);
    EXPECT_EQ(ah::map_buckets(anchor, keys), before);
    EXPECT_EQ(vec(anchor.anchor_sizes()), sizes);
  }
}

TEST(Anchor, SameHistorySameMapping) {
  const auto keys = ah::make_keys(10'000, 9);
  auto build = [] {
    ah::AnchorHash anchor(100, 100, 77);
    for (ah::BucketId b : {5u, 9u, 50u, 99u, 0u}) anchor.remove_bucket(b);
    anchor.add_bucket();
    return anchor;
  };
  EXPECT_EQ(ah::map_buckets(build(), keys), ah::map_buckets(build(), keys));
  ah::AnchorHash other(100, 100, 78);
  for (ah::BucketId b : {5u, 9u, 50u, 99u, 0u}) other.remove_bucket(b);
  other.add_bucket();
  EXPECT_NE(ah::map_buckets(build(), keys), ah::map_buckets(other, keys));
}

TEST(Anchor, WorkingBucketsEquallyLoaded) {
  auto anchor = ah::build_anchor<ah::AnchorHash>(200, 100, 1, ah::RemovalPattern::kRandom, 2);
  const auto keys = ah::make_keys(1'000'000, 10);
  std::vector<std::uint64_t> by_bucket(200, 0);
  for (const auto b : ah::map_buckets(anchor, keys)) ++by_bucket[b];
  std::vector<std::uint64_t> counts;
  for (const auto b : anchor.working_set()) counts.push_back(by_bucket[b]);
  EXPECT_FALSE(ah::chi_square_uniform(counts).rejects(0.001));
}

namespace anchorhash {
void PrintTo(RemovalPattern p, std::ostream* os) { *os << removal_pattern_name(p); }
}  // namespace anchorhash

// tau - 1 is a sum of independent Bernoulli(1/(w+j)) for any fixed removal
// order; compare the observed histogram against that distribution.
class TauDistribution : public ::testing::TestWithParam<ah::RemovalPattern> {};

TEST_P(TauDistribution, MatchesExactLaw) {
  constexpr std::uint32_t a = 300, w = 100;
  const auto anchor = ah::build_anchor<ah::AnchorHash>(a, w, 11, GetParam(), 12);
  const auto keys = ah::make_keys(1'000'000, 13);
  const auto summary = ah::trace_keys(anchor, keys);
  const auto pmf = ah::testing::exact_tau_pmf(a, w);
  const auto fit = ah::chi_square_fit(summary.histogram, pmf);
  EXPECT_FALSE(fit.rejects(0.001)) << "chi2=" << fit.statistic << " dof=" << fit.dof;
  const auto stats = ah::tau_statistics(summary, a, w);
  EXPECT_NEAR(stats.mean, ah::testing::exact_tau_mean(a, w), 4 * stats.sem);
}

INSTANTIATE_TEST_SUITE_P(Removals, TauDistribution,
                         ::testing::Values(ah::RemovalPattern::kRandom, ah::RemovalPattern::kAscending),
                         [](const auto& info) { return std::string(ah::removal_pattern_name(info.param)); });

TEST(Anchor, SeedChangesMappingButNotStructure) {
  ah::AnchorHash a(30, 30, 1), b(30, 30, 2);
  for (ah::BucketId x : {3u, 7u, 11u}) {
    a.remove_bucket(x);
    b.remove_bucket(x);
  }
  EXPECT_EQ(vec(a.anchor_sizes()), vec(b.anchor_sizes()));
  EXPECT_EQ(vec(a.successors()), vec(b.successors()));
  const auto keys = ah::make_keys(1000, 1);
  EXPECT_NE(ah::map_buckets(a, keys), ah::map_buckets(b, keys));
}
