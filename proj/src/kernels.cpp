#include "anchorhash/kernels.hpp"

#include <algorithm>
#include <cstddef>

#include "anchorhash/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anchorhash {

namespace {

using Index = std::ptrdiff_t;

void record(TraceSummary& s, const LookupTrace& t) {
  ++s.keys;
  s.hash_ops += t.hash_ops;
  s.hash_ops_sq += std::uint64_t{t.hash_ops} * t.hash_ops;
  s.memory_accesses += t.memory_accesses;
  s.memory_accesses_sq += std::uint64_t{t.memory_accesses} * t.memory_accesses;
  s.array_reads += t.array_reads;
  if (s.histogram.size() <= t.hash_ops) s.histogram.resize(t.hash_ops + 1, 0);
  ++s.histogram[t.hash_ops];
}

KeyCensus empty_census(const Balancer& balancer) {
  KeyCensus c;
  c.labels = balancer.live_labels();
  c.counts.assign(c.labels.size(), 0);
  return c;
}

// Folds per-label counts into the live-label census.
void fold_counts(KeyCensus& c, std::span<const std::uint64_t> by_label) {
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    c.counts[i] = by_label[c.labels[i]];
    c.total += c.counts[i];
  }
}

void classify_one(DisruptionCounts& d, Label before, Label after, ChurnEvent event, Label changed) {
  if (before == after) {
    ++d.unchanged;
  } else if ((event == ChurnEvent::kRemove && before == changed) ||
             (event == ChurnEvent::kAdd && after == changed)) {
    ++d.legitimate;
  } else {
    ++d.wrongful;
  }
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw ContractViolation("disruption census: mapping sizes differ");
}

}  // namespace

void TraceSummary::merge(const TraceSummary& other) {
  keys += other.keys;
  hash_ops += other.hash_ops;
  hash_ops_sq += other.hash_ops_sq;
  memory_accesses += other.memory_accesses;
  memory_accesses_sq += other.memory_accesses_sq;
  array_reads += other.array_reads;
  if (histogram.size() < other.histogram.size()) histogram.resize(other.histogram.size(), 0);
  for (std::size_t i = 0; i < other.histogram.size(); ++i) histogram[i] += other.histogram[i];
}

int kernel_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// ------------------------------------------------------------- parallel

std::vector<Label> map_keys(const Balancer& balancer, std::span<const Key> keys) {
  std::vector<Label> out(keys.size());
  const auto n = static_cast<Index>(keys.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    out[i] = balancer.lookup(keys[i]);
  }
  return out;
}

KeyCensus census(const Balancer& balancer, std::span<const Key> keys) {
  KeyCensus c = empty_census(balancer);
  std::vector<std::uint64_t> by_label(balancer.label_bound(), 0);
  const auto n = static_cast<Index>(keys.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(by_label.size(), 0);
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      ++local[balancer.lookup(keys[i])];
    }
#pragma omp critical
    for (std::size_t l = 0; l < local.size(); ++l) by_label[l] += local[l];
  }
  fold_counts(c, by_label);
  return c;
}

KeyCensus census_from_labels(std::span<const Label> labels, std::span<const Label> live) {
  KeyCensus c;
  c.labels.assign(live.begin(), live.end());
  c.counts.assign(live.size(), 0);
  const Label bound = live.empty() ? 0 : *std::max_element(live.begin(), live.end()) + 1;
  std::vector<std::uint64_t> by_label(bound, 0);
  for (const Label l : labels) {
    if (l < bound) ++by_label[l];
  }
  fold_counts(c, by_label);
  return c;
}

DisruptionCounts classify_disruption(std::span<const Label> before, std::span<const Label> after,
                                     ChurnEvent event, Label changed) {
  check_same_size(before.size(), after.size());
  const auto n = static_cast<Index>(before.size());
  std::uint64_t unchanged = 0;
  std::uint64_t legitimate = 0;
  std::uint64_t wrongful = 0;
#pragma omp parallel for schedule(static) reduction(+ : unchanged, legitimate, wrongful)
  for (Index i = 0; i < n; ++i) {
    DisruptionCounts d;
    classify_one(d, before[i], after[i], event, changed);
    unchanged += d.unchanged;
    legitimate += d.legitimate;
    wrongful += d.wrongful;
  }
  return {unchanged, legitimate, wrongful};
}

template <AnchorTier AnchorT>
std::vector<BucketId> map_buckets(const AnchorT& anchor, std::span<const Key> keys) {
  std::vector<BucketId> out(keys.size());
  const auto n = static_cast<Index>(keys.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    out[i] = anchor.get_bucket(keys[i]);
  }
  return out;
}

template <AnchorTier AnchorT>
TraceSummary trace_keys(const AnchorT& anchor, std::span<const Key> keys) {
  TraceSummary total;
  const auto n = static_cast<Index>(keys.size());
#pragma omp parallel
  {
    TraceSummary local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      record(local, anchor.get_bucket_traced(keys[i]).trace);
    }
#pragma omp critical
    total.merge(local);
  }
  return total;
}

TraceSummary trace_balancer(const Balancer& balancer, std::span<const Key> keys) {
  if (!keys.empty() && !balancer.lookup_traced(keys[0])) {
    throw ContractViolation(balancer.name() + " does not record lookup traces");
  }
  TraceSummary total;
  const auto n = static_cast<Index>(keys.size());
#pragma omp parallel
  {
    TraceSummary local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      record(local, balancer.lookup_traced(keys[i])->trace);
    }
#pragma omp critical
    total.merge(local);
  }
  return total;
}

// --------------------------------------------------------------- serial

namespace serial {

std::vector<Label> map_keys(const Balancer& balancer, std::span<const Key> keys) {
  std::vector<Label> out;
  out.reserve(keys.size());
  for (const Key k : keys) out.push_back(balancer.lookup(k));
  return out;
}

KeyCensus census(const Balancer& balancer, std::span<const Key> keys) {
  KeyCensus c = empty_census(balancer);
  std::vector<std::uint64_t> by_label(balancer.label_bound(), 0);
  for (const Key k : keys) ++by_label[balancer.lookup(k)];
  fold_counts(c, by_label);
  return c;
}

DisruptionCounts classify_disruption(std::span<const Label> before, std::span<const Label> after,
                                     ChurnEvent event, Label changed) {
  check_same_size(before.size(), after.size());
  DisruptionCounts d;
  for (std::size_t i = 0; i < before.size(); ++i) classify_one(d, before[i], after[i], event, changed);
  return d;
}

template <AnchorTier AnchorT>
std::vector<BucketId> map_buckets(const AnchorT& anchor, std::span<const Key> keys) {
  std::vector<BucketId> out;
  out.reserve(keys.size());
  for (const Key k : keys) out.push_back(anchor.get_bucket(k));
  return out;
}

template <AnchorTier AnchorT>
TraceSummary trace_keys(const AnchorT& anchor, std::span<const Key> keys) {
  TraceSummary s;
  for (const Key k : keys) record(s, anchor.get_bucket_traced(k).trace);
  return s;
}

}  // namespace serial

#define ANCHORHASH_INSTANTIATE(T)                                                          \
  template std::vector<BucketId> map_buckets<T>(const T&, std::span<const Key>);           \
  template TraceSummary trace_keys<T>(const T&, std::span<const Key>);                     \
  template std::vector<BucketId> serial::map_buckets<T>(const T&, std::span<const Key>);   \
  template TraceSummary serial::trace_keys<T>(const T&, std::span<const Key>);

ANCHORHASH_INSTANTIATE(AnchorHash)
ANCHORHASH_INSTANTIATE(ReducedAnchor)
ANCHORHASH_INSTANTIATE(NaiveAnchor)

#undef ANCHORHASH_INSTANTIATE

}  // namespace anchorhash
