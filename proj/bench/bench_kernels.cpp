// Serial reference kernels against their OpenMP versions, plus raw lookup
// cost per algorithm. Run with --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include <map>

#include "anchorhash/anchor.hpp"
#include "anchorhash/baselines.hpp"
#include "anchorhash/evaluation.hpp"
#include "anchorhash/kernels.hpp"
#include "anchorhash/reference.hpp"

namespace ah = anchorhash;

namespace {

constexpr std::size_t kKeys = 1 << 20;

const std::vector<ah::Key>& keys() {
  static const auto k = ah::make_keys(kKeys, 1);
  return k;
}

const ah::AnchorHash& anchor(std::uint32_t a) {
  static std::map<std::uint32_t, ah::AnchorHash> cache;
  auto it = cache.find(a);
  if (it == cache.end()) {
    it = cache.emplace(a, ah::build_anchor<ah::AnchorHash>(a, a / 2, 0, ah::RemovalPattern::kRandom, 1)).first;
  }
  return it->second;
}

void set_items(benchmark::State& state) {
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kKeys));
  state.counters["threads"] = ah::kernel_threads();
}

template <bool Parallel>
void BM_MapBuckets(benchmark::State& state) {
  const auto& a = anchor(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? ah::map_buckets(a, keys()) : ah::serial::map_buckets(a, keys());
    benchmark::DoNotOptimize(out.data());
  }
  set_items(state);
}

template <bool Parallel>
void BM_TraceKeys(benchmark::State& state) {
  const auto& a = anchor(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    auto s = Parallel ? ah::trace_keys(a, keys()) : ah::serial::trace_keys(a, keys());
    benchmark::DoNotOptimize(s.hash_ops);
  }
  set_items(state);
}

template <bool Parallel>
void BM_Census(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  auto bal = ah::make_balancer({.algo = "anchor", .capacity = 2 * n}, ah::numbered_resources(n));
  for (auto _ : state) {
    auto c = Parallel ? ah::census(*bal, keys()) : ah::serial::census(*bal, keys());
    benchmark::DoNotOptimize(c.total);
  }
  set_items(state);
}

void BM_Lookup(benchmark::State& state, const char* algo, ah::Tier tier) {
  const auto a = static_cast<std::uint32_t>(state.range(0));
  ah::BalancerConfig config{.algo = algo, .tier = tier, .capacity = a};
  auto bal = ah::make_balancer(config, ah::numbered_resources(a / 2));
  std::uint64_t sink = 0;
  for (auto _ : state) {
    for (const auto k : keys()) sink += bal->lookup(k);
  }
  benchmark::DoNotOptimize(sink);
  set_items(state);
}

}  // namespace

BENCHMARK(BM_MapBuckets<false>)->Name("map_buckets/serial")->Arg(1000)->Arg(100000);
BENCHMARK(BM_MapBuckets<true>)->Name("map_buckets/omp")->Arg(1000)->Arg(100000);
BENCHMARK(BM_TraceKeys<false>)->Name("trace_keys/serial")->Arg(1000)->Arg(100000);
BENCHMARK(BM_TraceKeys<true>)->Name("trace_keys/omp")->Arg(1000)->Arg(100000);
BENCHMARK(BM_Census<false>)->Name("census/serial")->Arg(1000);
BENCHMARK(BM_Census<true>)->Name("census/omp")->Arg(1000);
BENCHMARK_CAPTURE(BM_Lookup, anchor, "anchor", ah::Tier::kMinimal)->Arg(2000)->Arg(200000);
BENCHMARK_CAPTURE(BM_Lookup, anchor_reduced, "anchor", ah::Tier::kReduced)->Arg(2000);
BENCHMARK_CAPTURE(BM_Lookup, anchor_naive, "anchor", ah::Tier::kNaive)->Arg(2000);
BENCHMARK_CAPTURE(BM_Lookup, hrw, "hrw", ah::Tier::kMinimal)->Arg(2000);
BENCHMARK_CAPTURE(BM_Lookup, ring, "ring", ah::Tier::kMinimal)->Arg(2000);
BENCHMARK_CAPTURE(BM_Lookup, maglev, "maglev", ah::Tier::kMinimal)->Arg(2000);

BENCHMARK_MAIN();
