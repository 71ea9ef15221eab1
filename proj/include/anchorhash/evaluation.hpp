#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "anchorhash/balancer.hpp"
#include "anchorhash/errors.hpp"
#include "anchorhash/kernels.hpp"

namespace anchorhash {

// ------------------------------------------------------------ statistics

// 100 * (max - mean) / mean over the live resources' key counts.
// Throws ContractViolation on an empty census.
double oversubscription(std::span<const std::uint64_t> counts);
inline double oversubscription(const KeyCensus& c) { return oversubscription(c.counts); }

struct ChiSquareResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
  bool rejects(double alpha) const noexcept { return p_value < alpha; }
};

// Goodness of fit against the uniform distribution over the cells.
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts);
// Goodness of fit against explicit cell probabilities. Cells with expected
// count below `min_expected` are pooled into one; an observation in a
// zero-probability cell rejects outright.
ChiSquareResult chi_square_fit(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities, double min_expected = 5.0);
// Independence test on a rows x cols contingency table (row-major).
ChiSquareResult chi_square_independence(std::span<const std::uint64_t> table, std::size_t rows,
                                        std::size_t cols);

// Hash operations per lookup, with the theoretical upper bounds
// 1 + ln(a/w) on the mean and sqrt(ln(a/w)) on the standard deviation.
struct TauStats {
  std::uint64_t n = 0;
  double mean = 0;
  double stddev = 0;
  double sem = 0;        // standard error of the mean
  double stddev_se = 0;  // standard error of the standard deviation
  std::vector<std::uint64_t> histogram;
  std::vector<double> ccdf;  // ccdf[t] = P(tau > t)
  double mean_bound = 0;
  double stddev_bound = 0;

  double fraction_at(std::size_t t) const;
  double fraction_above(std::size_t t) const;
};

// Memory accesses per lookup. `bound` is 1 + ln(a/w) + ln^2(a/w); the
// average-case bound only applies when removals were random.
struct XiStats {
  std::uint64_t n = 0;
  double mean = 0;
  double sem = 0;
  double raw_reads_mean = 0;
  double bound = 0;
  double squared_bound = 0;  // (1 + ln(a/w))^2
};

TauStats tau_statistics(const TraceSummary& summary, std::uint32_t capacity, std::uint32_t working);
XiStats xi_statistics(const TraceSummary& summary, std::uint32_t capacity, std::uint32_t working);

inline constexpr std::uint64_t kMinStatisticKeys = 10'000;

template <AnchorTier AnchorT>
TauStats tau_statistics(const AnchorT& anchor, std::uint64_t n_keys, std::uint64_t key_seed) {
  if (n_keys < kMinStatisticKeys) throw ContractViolation("tau_statistics: need at least 10^4 keys");
  const auto keys = make_keys(n_keys, key_seed);
  return tau_statistics(trace_keys(anchor, keys), anchor.capacity(), anchor.size());
}

template <AnchorTier AnchorT>
XiStats xi_statistics(const AnchorT& anchor, std::uint64_t n_keys, std::uint64_t key_seed) {
  if (n_keys < kMinStatisticKeys) throw ContractViolation("xi_statistics: need at least 10^4 keys");
  const auto keys = make_keys(n_keys, key_seed);
  return xi_statistics(trace_keys(anchor, keys), anchor.capacity(), anchor.size());
}

// ------------------------------------------------------- anchor scenarios

enum class RemovalPattern {
  kRandom,     // uniformly random working bucket each time
  kAscending,  // lowest working id first
};

std::string_view removal_pattern_name(RemovalPattern p) noexcept;

// Removes `count` buckets according to `pattern`.
template <AnchorTier AnchorT>
void apply_removals(AnchorT& anchor, std::uint32_t count, RemovalPattern pattern,
                    std::uint64_t removal_seed) {
  std::mt19937_64 rng(removal_seed);
  BucketId next_ascending = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    BucketId b = 0;
    if (pattern == RemovalPattern::kRandom) {
      std::uniform_int_distribution<std::uint32_t> pick(0, anchor.size() - 1);
      b = anchor.working_order()[pick(rng)];
    } else {
      while (!anchor.is_working(next_ascending)) ++next_ascending;
      b = next_ascending;
    }
    anchor.remove_bucket(b);
  }
}

// Full anchor of `capacity` buckets, then capacity - working removals.
template <AnchorTier AnchorT>
AnchorT build_anchor(std::uint32_t capacity, std::uint32_t working, std::uint64_t seed,
                     RemovalPattern pattern, std::uint64_t removal_seed) {
  if (working == 0 || working > capacity) throw ContractViolation("build_anchor: bad working count");
  AnchorT anchor(capacity, capacity, seed);
  apply_removals(anchor, capacity - working, pattern, removal_seed);
  return anchor;
}

// ----------------------------------------------------------- update cost

struct UpdateCost {
  std::uint32_t trials = 0;
  std::uint64_t remove_ops = 0;  // op count of the last measured removal
  std::uint64_t add_ops = 0;
  double mean_remove_ops = 0;
  double mean_add_ops = 0;
  double wall_remove_ns = 0;  // wall clock, report only
  double wall_add_ns = 0;
};

// Repeats (remove a random resource, add it back) `trials` times.
UpdateCost update_cost(Balancer& balancer, std::uint32_t trials, std::uint64_t seed);

// ------------------------------------------------------------ throughput

// Million lookups per second over repeated passes of `keys`, running for at
// least `min_seconds`. Wall clock; never gated.
template <class LookupFn>
double lookup_rate_mkps(LookupFn&& lookup, std::span<const Key> keys, double min_seconds) {
  using Clock = std::chrono::steady_clock;
  if (keys.empty()) throw ContractViolation("lookup_rate: empty key set");
  std::uint64_t sink = 0;
  std::uint64_t done = 0;
  const auto start = Clock::now();
  double elapsed = 0;
  do {
    for (const Key k : keys) sink += lookup(k);
    done += keys.size();
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < min_seconds);
  // Keep the loop observable.
  volatile std::uint64_t keep = sink;
  (void)keep;
  return static_cast<double>(done) / elapsed / 1e6;
}

// --------------------------------------------------------------- reports

// One CSV row. Wall-clock metrics are named "wall_*" and are the only
// values that may differ between runs with the same inputs.
struct MetricRow {
  std::string algorithm;
  std::string scenario;
  std::string metric;
  std::string value;
  std::uint64_t samples = 0;
  std::optional<double> std_error;

  bool wall_clock() const { return metric.rfind("wall_", 0) == 0; }
};

std::string format_number(double v);

class ScenarioReport {
 public:
  ScenarioReport(std::string algorithm, std::string scenario)
      : algorithm_(std::move(algorithm)), scenario_(std::move(scenario)) {}

  void set_scenario(std::string scenario) { scenario_ = std::move(scenario); }
  const std::string& algorithm() const noexcept { return algorithm_; }

  void add(std::string metric, double value, std::uint64_t samples = 0,
           std::optional<double> std_error = std::nullopt);
  void add_text(std::string metric, std::string value);
  void add_tau(const TauStats& s);
  void add_xi(const XiStats& s);
  void add_disruption(const std::string& event, const DisruptionCounts& d);
  void add_update_cost(const UpdateCost& c);
  // Structured payload kept in the JSON form only (snapshots, histograms).
  void add_detail(nlohmann::json detail) { details_.push_back(std::move(detail)); }

  const std::vector<MetricRow>& rows() const noexcept { return rows_; }
  nlohmann::json to_json() const;

 private:
  std::string algorithm_;
  std::string scenario_;
  std::vector<MetricRow> rows_;
  nlohmann::json details_ = nlohmann::json::array();
};

inline constexpr std::string_view kCsvHeader = "algorithm,scenario,metric,value,samples,std_error";
std::string to_csv(std::span<const MetricRow> rows, bool header = true);
std::string to_csv(std::span<const ScenarioReport> reports);
nlohmann::json to_json(std::span<const ScenarioReport> reports);

}  // namespace anchorhash
