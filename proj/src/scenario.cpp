#include "anchorhash/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <unordered_set>

#include "anchorhash/hashing.hpp"
#include "anchorhash/kernels.hpp"
#include "anchorhash/snapshot.hpp"

namespace anchorhash {

namespace {

constexpr Salt kChoiceSalt = 0x63686f6963652d31ULL;
constexpr Salt kBatchSalt = 0x62617463682d6b31ULL;
constexpr Salt kProbeSalt = 0x70726f62652d6b31ULL;

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string t; in >> t;) out.push_back(std::move(t));
  return out;
}

template <class Int>
Int parse_int(std::size_t line, std::string_view text, std::string_view what) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError(line, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

void expect_args(std::size_t line, const std::vector<std::string>& t, std::size_t lo, std::size_t hi) {
  if (t.size() - 1 < lo || t.size() - 1 > hi) {
    throw ParseError(line, "wrong number of arguments to '" + t[0] + "'");
  }
}

ScenarioEvent make_event(EventKind kind, std::size_t line) {
  ScenarioEvent e;
  e.kind = kind;
  e.line = line;
  return e;
}

ScenarioEvent parse_init(std::size_t line, const std::vector<std::string>& t) {
  ScenarioEvent e = make_event(EventKind::kInit, line);
  bool have_a = false, have_w = false, have_resources = false;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const auto eq = t[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + t[i] + "'");
    const std::string key = t[i].substr(0, eq);
    const std::string_view value = std::string_view(t[i]).substr(eq + 1);
    if (key == "a" && !have_a) {
      e.capacity = parse_int<std::uint32_t>(line, value, "a");
      have_a = true;
    } else if (key == "w" && !have_w) {
      e.working = parse_int<std::uint32_t>(line, value, "w");
      have_w = true;
    } else if (key == "resources" && !have_resources) {
      e.resources = split(value, ',');
      have_resources = true;
    } else {
      throw ParseError(line, "unexpected init field '" + key + "'");
    }
  }
  if (!have_a) throw ParseError(line, "init needs a=<capacity>");
  if (have_w == have_resources) throw ParseError(line, "init needs exactly one of w= or resources=");
  if (have_resources) {
    std::unordered_set<std::string> seen;
    for (const auto& r : e.resources) {
      if (r.empty() || r.size() > ResourceId::kMaxLength) throw ParseError(line, "bad resource name '" + r + "'");
      if (!seen.insert(r).second) throw ParseError(line, "duplicate resource '" + r + "'");
    }
    e.working = static_cast<std::uint32_t>(e.resources.size());
  }
  if (e.capacity == 0 || e.working == 0 || e.working > e.capacity) {
    throw ParseError(line, "init needs 0 < w <= a");
  }
  return e;
}

std::string fresh_name(const Balancer& b) {
  for (std::uint64_t i = 0;; ++i) {
    ResourceId id(std::to_string(i));
    if (!b.contains(id)) return id.str();
  }
}

class Runner {
 public:
  Runner(const ScenarioScript& script, const RunOptions& options)
      : script_(script),
        options_(options),
        seed_(script.seed.value_or(options.seed)),
        rng_(mix64(seed_, kChoiceSalt)),
        report_(options.config.algo == "anchor" && options.config.tier != Tier::kMinimal
                    ? "anchor-" + std::string(tier_name(options.config.tier))
                    : options.config.algo,
                "") {}

  ScenarioReport run() {
    for (std::size_t i = 0; i < script_.events.size(); ++i) {
      const auto& e = script_.events[i];
      report_.set_scenario("e" + std::to_string(i) + ":" + std::string(event_kind_name(e.kind)));
      try {
        step(i, e);
      } catch (const IntegrityError&) {
        throw;
      } catch (const ExecutionError&) {
        throw;
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& err) {
        throw ExecutionError(i, e.line, err.what());
      }
    }
    return std::move(report_);
  }

 private:
  void step(std::size_t index, const ScenarioEvent& e) {
    switch (e.kind) {
      case EventKind::kInit: return init(e);
      case EventKind::kRemove: return churn(index, e, ChurnEvent::kRemove);
      case EventKind::kAdd: return churn(index, e, ChurnEvent::kAdd);
      case EventKind::kLookupBatch: return lookup_batch(index, e);
      case EventKind::kMeasure: return measure(e);
      case EventKind::kDumpState: return dump_state(index, e);
    }
  }

  void init(const ScenarioEvent& e) {
    BalancerConfig config = options_.config;
    config.capacity = e.capacity;
    config.seed = seed_;
    std::vector<ResourceId> initial;
    if (e.resources.empty()) {
      initial = numbered_resources(e.working);
    } else {
      for (const auto& r : e.resources) initial.emplace_back(r);
    }
    balancer_ = make_balancer(config, initial);
    probe_ = make_keys(options_.probe_keys, mix64(seed_, kProbeSalt));
    probe_labels_ = map_keys(*balancer_, probe_);
    report_.add("capacity", e.capacity);
    report_.add("working", static_cast<double>(balancer_->size()));
  }

  void churn(std::size_t index, const ScenarioEvent& e, ChurnEvent kind) {
    std::string name;
    if (e.resource) {
      name = *e.resource;
    } else if (kind == ChurnEvent::kRemove) {
      const auto live = balancer_->live_labels();
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
      name = balancer_->resource(live[pick(rng_)]).str();
    } else {
      name = fresh_name(*balancer_);
    }
    const ResourceId id(name);

    using Clock = std::chrono::steady_clock;
    Label changed = 0;
    const auto t0 = Clock::now();
    if (kind == ChurnEvent::kRemove) {
      changed = balancer_->label_of(id);
      balancer_->remove_resource(id);
    } else {
      changed = balancer_->add_resource(id);
    }
    const auto t1 = Clock::now();
    const std::uint64_t ops = balancer_->last_update_ops();
    (kind == ChurnEvent::kRemove ? remove_ops_ : add_ops_).push_back(ops);

    report_.add_text("resource", name);
    report_.add("label", changed);
    report_.add("update_ops", static_cast<double>(ops));
    report_.add("wall_update_ns", std::chrono::duration<double, std::nano>(t1 - t0).count());
    if (!probe_.empty()) {
      auto after = map_keys(*balancer_, probe_);
      const auto d = classify_disruption(probe_labels_, after, kind, changed);
      report_.add_disruption(kind == ChurnEvent::kRemove ? "remove" : "add", d);
      totals_.unchanged += d.unchanged;
      totals_.legitimate += d.legitimate;
      totals_.wrongful += d.wrongful;
      probe_labels_ = std::move(after);
    }
    (void)index;
  }

  void lookup_batch(std::size_t index, const ScenarioEvent& e) {
    batch_ = make_keys(e.count, mix64(seed_ ^ index, kBatchSalt));
    const auto c = census(*balancer_, batch_);
    report_.add("keys", static_cast<double>(c.total));
    report_.add("max_load", static_cast<double>(*std::max_element(c.counts.begin(), c.counts.end())));
    report_.add("min_load", static_cast<double>(*std::min_element(c.counts.begin(), c.counts.end())));
  }

  std::span<const Key> sample() const {
    if (!batch_.empty()) return batch_;
    if (!probe_.empty()) return probe_;
    throw ContractViolation("measure needs a lookup_batch or probe keys");
  }

  void measure(const ScenarioEvent& e) {
    for (const auto& m : e.metrics) {
      if (m == "oversubscription") {
        const auto c = census(*balancer_, sample());
        report_.add("oversubscription", oversubscription(c), c.total);
      } else if (m == "chi_square") {
        const auto c = census(*balancer_, sample());
        const auto r = chi_square_uniform(c.counts);
        report_.add("chi_square_statistic", r.statistic, c.total);
        report_.add("chi_square_dof", r.dof);
        report_.add("chi_square_p_value", r.p_value);
      } else if (m == "tau" || m == "xi") {
        const auto keys = sample();
        if (keys.size() < kMinStatisticKeys) throw ContractViolation(m + " needs at least 10^4 keys");
        const auto s = trace_balancer(*balancer_, keys);
        const auto a = balancer_->label_bound();
        const auto w = static_cast<std::uint32_t>(balancer_->size());
        if (m == "tau") {
          report_.add_tau(tau_statistics(s, a, w));
        } else {
          report_.add_xi(xi_statistics(s, a, w));
        }
      } else if (m == "update_cost") {
        add_mean("update_remove_ops_mean", remove_ops_);
        add_mean("update_add_ops_mean", add_ops_);
      } else if (m == "disruption") {
        report_.add_disruption("total", totals_);
      } else if (m == "throughput") {
        const Balancer& b = *balancer_;
        const double mkps =
            lookup_rate_mkps([&b](Key k) { return b.lookup(k); }, sample(), options_.throughput_seconds);
        report_.add("wall_lookup_mkps", mkps, sample().size());
      } else if (m == "state") {
        report_.add_detail(balancer_->state_json());
      }
    }
  }

  void add_mean(const std::string& metric, const std::vector<std::uint64_t>& ops) {
    double sum = 0;
    for (const auto v : ops) sum += static_cast<double>(v);
    report_.add(metric, ops.empty() ? 0.0 : sum / static_cast<double>(ops.size()), ops.size());
  }

  void dump_state(std::size_t index, const ScenarioEvent& e) {
    nlohmann::json state = balancer_->state_json();
    if (e.path) {
      const std::filesystem::path path(*e.path);
      if (path.extension() == ".json") {
        write_file(path, state.dump(2) + "\n");
      } else {
        const auto bytes = balancer_->encoded_state();
        if (!bytes) throw ContractViolation(balancer_->name() + " has no binary snapshot format");
        write_file(path, *bytes);
      }
      report_.add_text("path", *e.path);
    }
    report_.add_detail({{"event", index}, {"state", std::move(state)}});
  }

  const ScenarioScript& script_;
  const RunOptions& options_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  ScenarioReport report_;
  std::unique_ptr<Balancer> balancer_;
  std::vector<Key> probe_;
  std::vector<Label> probe_labels_;
  std::vector<Key> batch_;
  DisruptionCounts totals_;
  std::vector<std::uint64_t> remove_ops_;
  std::vector<std::uint64_t> add_ops_;
};

}  // namespace

std::string_view event_kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kInit: return "init";
    case EventKind::kRemove: return "remove";
    case EventKind::kAdd: return "add";
    case EventKind::kLookupBatch: return "lookup_batch";
    case EventKind::kMeasure: return "measure";
    case EventKind::kDumpState: return "dump-state";
  }
  return "?";
}

ScenarioScript parse_script(std::string_view text) {
  ScenarioScript script;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto t = tokens(line);
    if (t.empty()) continue;

    const std::string& cmd = t[0];
    const bool initialized = !script.events.empty();
    if (cmd != "init" && cmd != "seed" && !initialized) {
      throw ParseError(line_no, "first event must be init");
    }
    if (cmd == "seed") {
      expect_args(line_no, t, 1, 1);
      if (initialized) throw ParseError(line_no, "seed must come before init");
      if (script.seed) throw ParseError(line_no, "seed given twice");
      script.seed = parse_int<std::uint64_t>(line_no, t[1], "seed");
    } else if (cmd == "init") {
      if (initialized) throw ParseError(line_no, "init given twice");
      script.events.push_back(parse_init(line_no, t));
    } else if (cmd == "remove" || cmd == "add") {
      ScenarioEvent e = make_event(cmd == "remove" ? EventKind::kRemove : EventKind::kAdd, line_no);
      if (cmd == "remove") {
        expect_args(line_no, t, 1, 1);
        if (t[1] != "random") e.resource = t[1];
      } else {
        expect_args(line_no, t, 0, 1);
        if (t.size() == 2) e.resource = t[1];
      }
      if (e.resource && e.resource->size() > ResourceId::kMaxLength) {
        throw ParseError(line_no, "resource name too long");
      }
      script.events.push_back(std::move(e));
    } else if (cmd == "lookup_batch") {
      expect_args(line_no, t, 1, 1);
      ScenarioEvent e = make_event(EventKind::kLookupBatch, line_no);
      e.count = parse_int<std::uint64_t>(line_no, t[1], "key count");
      if (e.count == 0) throw ParseError(line_no, "lookup_batch needs a positive count");
      script.events.push_back(std::move(e));
    } else if (cmd == "measure") {
      expect_args(line_no, t, 1, 1);
      ScenarioEvent e = make_event(EventKind::kMeasure, line_no);
      e.metrics = split(t[1], ',');
      for (const auto& m : e.metrics) {
        if (std::find(std::begin(kMeasureMetrics), std::end(kMeasureMetrics), m) == std::end(kMeasureMetrics)) {
          throw ParseError(line_no, "unknown metric '" + m + "'");
        }
      }
      script.events.push_back(std::move(e));
    } else if (cmd == "dump-state") {
      expect_args(line_no, t, 0, 1);
      ScenarioEvent e = make_event(EventKind::kDumpState, line_no);
      if (t.size() == 2) e.path = t[1];
      script.events.push_back(std::move(e));
    } else {
      throw ParseError(line_no, "unknown event '" + cmd + "'");
    }
  }
  if (script.events.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "script has no events");
  return script;
}

ScenarioScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open script " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

ScenarioReport run_scenario(const ScenarioScript& script, const RunOptions& options) {
  return Runner(script, options).run();
}

}  // namespace anchorhash
