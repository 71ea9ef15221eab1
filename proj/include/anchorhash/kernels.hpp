#pragma once

// Data-parallel per-key kernels used by the evaluation harness. Each kernel
// has an OpenMP implementation and a plain serial reference in
// anchorhash::serial; tests require the two to agree exactly, and all
// aggregates are integer so the result does not depend on thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "anchorhash/anchor.hpp"
#include "anchorhash/balancer.hpp"
#include "anchorhash/reference.hpp"

namespace anchorhash {

// Per-resource key counts, restricted to live labels (ascending).
struct KeyCensus {
  std::vector<Label> labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

// Integer aggregates of LookupTrace over a key sample.
struct TraceSummary {
  std::uint64_t keys = 0;
  std::uint64_t hash_ops = 0;
  std::uint64_t hash_ops_sq = 0;
  std::uint64_t memory_accesses = 0;
  std::uint64_t memory_accesses_sq = 0;
  std::uint64_t array_reads = 0;
  // histogram[t] = keys needing exactly t hash operations.
  std::vector<std::uint64_t> histogram;

  void merge(const TraceSummary& other);
  bool operator==(const TraceSummary&) const = default;
};

enum class ChurnEvent { kAdd, kRemove };

// Per-key classification of one churn event:
//   unchanged    same label before and after
//   legitimate   moved onto the added resource / off the removed one
//   wrongful     moved for any other reason
struct DisruptionCounts {
  std::uint64_t unchanged = 0;
  std::uint64_t legitimate = 0;
  std::uint64_t wrongful = 0;

  std::uint64_t total() const noexcept { return unchanged + legitimate + wrongful; }
  double wrongful_fraction() const noexcept {
    return total() == 0 ? 0.0 : static_cast<double>(wrongful) / static_cast<double>(total());
  }
  bool operator==(const DisruptionCounts&) const = default;
};

std::vector<Label> map_keys(const Balancer& balancer, std::span<const Key> keys);
KeyCensus census(const Balancer& balancer, std::span<const Key> keys);
KeyCensus census_from_labels(std::span<const Label> labels, std::span<const Label> live);
// `changed` is the added or removed label.
DisruptionCounts classify_disruption(std::span<const Label> before, std::span<const Label> after,
                                     ChurnEvent event, Label changed);

template <AnchorTier AnchorT>
std::vector<BucketId> map_buckets(const AnchorT& anchor, std::span<const Key> keys);
template <AnchorTier AnchorT>
TraceSummary trace_keys(const AnchorT& anchor, std::span<const Key> keys);
// Throws ContractViolation if the balancer does not record traces.
TraceSummary trace_balancer(const Balancer& balancer, std::span<const Key> keys);

namespace serial {

std::vector<Label> map_keys(const Balancer& balancer, std::span<const Key> keys);
KeyCensus census(const Balancer& balancer, std::span<const Key> keys);
DisruptionCounts classify_disruption(std::span<const Label> before, std::span<const Label> after,
                                     ChurnEvent event, Label changed);
template <AnchorTier AnchorT>
std::vector<BucketId> map_buckets(const AnchorT& anchor, std::span<const Key> keys);
template <AnchorTier AnchorT>
TraceSummary trace_keys(const AnchorT& anchor, std::span<const Key> keys);

}  // namespace serial

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int kernel_threads() noexcept;

}  // namespace anchorhash
