#include "anchorhash/evaluation.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cstdio>
#include <limits>
#include <numeric>

namespace anchorhash {

namespace {

double chi_square_p(double statistic, double dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double log_ratio(std::uint32_t capacity, std::uint32_t working) {
  return std::log(static_cast<double>(capacity) / static_cast<double>(working));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double oversubscription(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw ContractViolation("oversubscription: no resources");
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw ContractViolation("oversubscription: empty census");
  const double mean = static_cast<double>(total) / static_cast<double>(counts.size());
  const double max = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  return 100.0 * (max - mean) / mean;
}

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw ContractViolation("chi_square_uniform: need at least two cells");
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  if (expected <= 0) throw ContractViolation("chi_square_uniform: empty sample");
  double stat = 0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return {stat, dof, chi_square_p(stat, dof)};
}

ChiSquareResult chi_square_fit(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities, double min_expected) {
  const std::uint64_t total = std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
  const std::size_t cells = std::max(observed.size(), probabilities.size());
  auto obs = [&](std::size_t i) { return i < observed.size() ? static_cast<double>(observed[i]) : 0.0; };
  auto prob = [&](std::size_t i) { return i < probabilities.size() ? probabilities[i] : 0.0; };

  // Any hit in a zero-probability cell is an outright misfit.
  for (std::size_t i = 0; i < cells; ++i) {
    if (prob(i) <= 0 && obs(i) > 0) return {std::numeric_limits<double>::infinity(), 0.0, 0.0};
  }
  double stat = 0;
  std::size_t used = 0;
  double pooled_obs = 0;
  double pooled_exp = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double e = prob(i) * static_cast<double>(total);
    if (e < min_expected) {
      pooled_obs += obs(i);
      pooled_exp += e;
      continue;
    }
    const double d = obs(i) - e;
    stat += d * d / e;
    ++used;
  }
  if (pooled_exp > 0) {
    const double d = pooled_obs - pooled_exp;
    stat += d * d / pooled_exp;
    ++used;
  } else if (pooled_obs > 0) {
    return {std::numeric_limits<double>::infinity(), static_cast<double>(used), 0.0};
  }
  const double dof = used > 0 ? static_cast<double>(used - 1) : 0.0;
  return {stat, dof, chi_square_p(stat, dof)};
}

ChiSquareResult chi_square_independence(std::span<const std::uint64_t> table, std::size_t rows,
                                        std::size_t cols) {
  if (table.size() != rows * cols || rows < 2 || cols < 2) {
    throw ContractViolation("chi_square_independence: bad table shape");
  }
  std::vector<double> row_sum(rows, 0), col_sum(cols, 0);
  double total = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<double>(table[r * cols + c]);
      row_sum[r] += v;
      col_sum[c] += v;
      total += v;
    }
  }
  double stat = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = row_sum[r] * col_sum[c] / total;
      const double d = static_cast<double>(table[r * cols + c]) - e;
      stat += d * d / e;
    }
  }
  const double dof = static_cast<double>((rows - 1) * (cols - 1));
  return {stat, dof, chi_square_p(stat, dof)};
}

double TauStats::fraction_at(std::size_t t) const {
  return t < histogram.size() && n > 0 ? static_cast<double>(histogram[t]) / static_cast<double>(n) : 0.0;
}

double TauStats::fraction_above(std::size_t t) const { return t < ccdf.size() ? ccdf[t] : 0.0; }

TauStats tau_statistics(const TraceSummary& s, std::uint32_t capacity, std::uint32_t working) {
  TauStats out;
  out.n = s.keys;
  out.histogram = s.histogram;
  const double lr = log_ratio(capacity, working);
  out.mean_bound = 1.0 + lr;
  out.stddev_bound = std::sqrt(lr);
  if (s.keys == 0) return out;

  const auto n = static_cast<double>(s.keys);
  out.mean = static_cast<double>(s.hash_ops) / n;
  // Central moments from the exact histogram.
  double m2 = 0, m4 = 0;
  for (std::size_t t = 0; t < s.histogram.size(); ++t) {
    const double d = static_cast<double>(t) - out.mean;
    const double w = static_cast<double>(s.histogram[t]);
    m2 += w * d * d;
    m4 += w * d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  const double var = s.keys > 1 ? m2 * n / (n - 1) : 0.0;
  out.stddev = std::sqrt(var);
  out.sem = out.stddev / std::sqrt(n);
  // Var(s^2) ~ (m4 - m2^2) / n; delta method for s.
  if (out.stddev > 0) {
    out.stddev_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n) / (2.0 * out.stddev);
  }

  out.ccdf.assign(s.histogram.size(), 0.0);
  std::uint64_t above = s.keys;
  for (std::size_t t = 0; t < s.histogram.size(); ++t) {
    above -= s.histogram[t];
    out.ccdf[t] = static_cast<double>(above) / n;
  }
  return out;
}

XiStats xi_statistics(const TraceSummary& s, std::uint32_t capacity, std::uint32_t working) {
  XiStats out;
  out.n = s.keys;
  const double lr = log_ratio(capacity, working);
  out.bound = 1.0 + lr + lr * lr;
  out.squared_bound = (1.0 + lr) * (1.0 + lr);
  if (s.keys == 0) return out;
  const auto n = static_cast<double>(s.keys);
  out.mean = static_cast<double>(s.memory_accesses) / n;
  out.raw_reads_mean = static_cast<double>(s.array_reads) / n;
  if (s.keys > 1) {
    const double var =
        (static_cast<double>(s.memory_accesses_sq) - n * out.mean * out.mean) / (n - 1);
    out.sem = std::sqrt(std::max(0.0, var) / n);
  }
  return out;
}

std::string_view removal_pattern_name(RemovalPattern p) noexcept {
  return p == RemovalPattern::kRandom ? "random" : "ascending";
}

UpdateCost update_cost(Balancer& balancer, std::uint32_t trials, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  if (trials == 0) throw ContractViolation("update_cost: need at least one trial");
  if (balancer.size() < 2) throw ContractViolation("update_cost: need two live resources");
  std::mt19937_64 rng(seed);
  UpdateCost cost;
  cost.trials = trials;
  double remove_ns = 0, add_ns = 0;
  double remove_ops = 0, add_ops = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    const auto live = balancer.live_labels();
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    const ResourceId id = balancer.resource(live[pick(rng)]);

    auto t0 = Clock::now();
    balancer.remove_resource(id);
    auto t1 = Clock::now();
    cost.remove_ops = balancer.last_update_ops();
    remove_ops += static_cast<double>(cost.remove_ops);
    remove_ns += std::chrono::duration<double, std::nano>(t1 - t0).count();

    t0 = Clock::now();
    balancer.add_resource(id);
    t1 = Clock::now();
    cost.add_ops = balancer.last_update_ops();
    add_ops += static_cast<double>(cost.add_ops);
    add_ns += std::chrono::duration<double, std::nano>(t1 - t0).count();
  }
  cost.mean_remove_ops = remove_ops / trials;
  cost.mean_add_ops = add_ops / trials;
  cost.wall_remove_ns = remove_ns / trials;
  cost.wall_add_ns = add_ns / trials;
  return cost;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void ScenarioReport::add(std::string metric, double value, std::uint64_t samples,
                         std::optional<double> std_error) {
  rows_.push_back({algorithm_, scenario_, std::move(metric), format_number(value), samples, std_error});
}

void ScenarioReport::add_text(std::string metric, std::string value) {
  rows_.push_back({algorithm_, scenario_, std::move(metric), std::move(value), 0, std::nullopt});
}

void ScenarioReport::add_tau(const TauStats& s) {
  add("tau_mean", s.mean, s.n, s.sem);
  add("tau_std", s.stddev, s.n, s.stddev_se);
  add("tau_mean_bound", s.mean_bound);
  add("tau_std_bound", s.stddev_bound);
  for (std::size_t t = 1; t < s.histogram.size(); ++t) {
    add("tau_hist_" + std::to_string(t), static_cast<double>(s.histogram[t]), s.n);
  }
  for (std::size_t t = 1; t < s.ccdf.size(); ++t) {
    add("tau_ccdf_gt_" + std::to_string(t), s.ccdf[t], s.n);
  }
}

void ScenarioReport::add_xi(const XiStats& s) {
  add("xi_mean", s.mean, s.n, s.sem);
  add("xi_bound", s.bound);
  add("xi_squared_bound", s.squared_bound);
  add("xi_raw_reads_mean", s.raw_reads_mean, s.n);
}

void ScenarioReport::add_disruption(const std::string& event, const DisruptionCounts& d) {
  add(event + "_unchanged", static_cast<double>(d.unchanged), d.total());
  add(event + "_legitimate", static_cast<double>(d.legitimate), d.total());
  add(event + "_wrongful", static_cast<double>(d.wrongful), d.total());
  add(event + "_wrongful_fraction", d.wrongful_fraction(), d.total());
}

void ScenarioReport::add_update_cost(const UpdateCost& c) {
  add("update_remove_ops", static_cast<double>(c.remove_ops), c.trials);
  add("update_add_ops", static_cast<double>(c.add_ops), c.trials);
  add("update_remove_ops_mean", c.mean_remove_ops, c.trials);
  add("update_add_ops_mean", c.mean_add_ops, c.trials);
  add("wall_update_remove_ns", c.wall_remove_ns, c.trials);
  add("wall_update_add_ns", c.wall_add_ns, c.trials);
}

nlohmann::json ScenarioReport::to_json() const {
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json m = {{"scenario", r.scenario}, {"metric", r.metric}, {"value", r.value},
                        {"samples", r.samples}};
    if (r.std_error) m["std_error"] = format_number(*r.std_error);
    metrics.push_back(std::move(m));
  }
  return {{"algorithm", algorithm_}, {"metrics", std::move(metrics)}, {"details", details_}};
}

std::string to_csv(std::span<const MetricRow> rows, bool header) {
  std::string out;
  if (header) {
    out += kCsvHeader;
    out += '\n';
  }
  for (const auto& r : rows) {
    out += csv_escape(r.algorithm) + ',' + csv_escape(r.scenario) + ',' + csv_escape(r.metric) + ',' +
           csv_escape(r.value) + ',' + std::to_string(r.samples) + ',' +
           (r.std_error ? format_number(*r.std_error) : std::string()) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const ScenarioReport> reports) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : reports) out += to_csv(r.rows(), false);
  return out;
}

nlohmann::json to_json(std::span<const ScenarioReport> reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(r.to_json());
  return {{"reports", std::move(out)}};
}

}  // namespace anchorhash
