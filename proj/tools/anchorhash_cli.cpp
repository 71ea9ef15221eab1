// anchorhash_cli: scenario runner, evaluation suite and snapshot tool.
//
// Exit codes: 0 success, 2 parse/usage error, 3 execution error,
// 4 integrity error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "anchorhash/anchor.hpp"
#include "anchorhash/balancer.hpp"
#include "anchorhash/evaluation.hpp"
#include "anchorhash/hashing.hpp"
#include "anchorhash/kernels.hpp"
#include "anchorhash/reference.hpp"
#include "anchorhash/scenario.hpp"
#include "anchorhash/snapshot.hpp"
#include "anchorhash/wrapper.hpp"

namespace ah = anchorhash;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitExecution = 3;
constexpr int kExitIntegrity = 4;

struct CommonFlags {
  std::string algo = "anchor";
  std::string tier = "minimal";
  std::uint32_t a = 2000;
  std::uint32_t w = 1000;
  std::optional<std::uint64_t> seed;
  std::uint64_t keys = 1'000'000;
  std::uint32_t copies = 100;
  std::uint64_t table_size = 0;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--algo", f.algo, "anchor | hrw | ring | maglev")
      ->check(CLI::IsMember({"anchor", "hrw", "ring", "maglev"}));
  cmd->add_option("--tier", f.tier, "anchor tier: minimal | reduced | naive")
      ->check(CLI::IsMember({"minimal", "reduced", "naive"}));
  cmd->add_option("--seed", f.seed, "global seed");
  cmd->add_option("--copies", f.copies, "ring virtual nodes per resource")->check(CLI::PositiveNumber);
  cmd->add_option("--table-size", f.table_size, "maglev table size (prime; default >= 100 * a)");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

ah::BalancerConfig config_of(const CommonFlags& f) {
  ah::BalancerConfig c;
  c.algo = f.algo;
  c.tier = ah::parse_tier(f.tier);
  c.capacity = f.a;
  c.copies = f.copies;
  c.table_size = f.table_size;
  c.seed = f.seed.value_or(0);
  return c;
}

void emit(const CommonFlags& f, const std::vector<ah::ScenarioReport>& reports) {
  const std::string text = f.format == "json" ? ah::to_json(reports).dump(2) + "\n" : ah::to_csv(reports);
  if (f.out.empty()) {
    std::cout << text;
  } else {
    ah::write_file(f.out, text);
  }
}

// ---------------------------------------------------------------- run

int cmd_run(const CommonFlags& f, const std::string& script_path, std::uint64_t probe_keys) {
  auto script = ah::load_script(script_path);
  if (f.seed) script.seed = f.seed;
  ah::RunOptions options;
  options.config = config_of(f);
  options.probe_keys = probe_keys;
  emit(f, {ah::run_scenario(script, options)});
  return 0;
}

// --------------------------------------------------------------- eval

template <ah::AnchorTier AnchorT>
void anchor_traces(ah::ScenarioReport& report, const CommonFlags& f, std::span<const ah::Key> keys) {
  const auto seed = f.seed.value_or(0);
  for (const auto pattern : {ah::RemovalPattern::kRandom, ah::RemovalPattern::kAscending}) {
    const auto anchor = ah::build_anchor<AnchorT>(f.a, f.w, seed, pattern, ah::mix64(seed, 1));
    report.set_scenario("trace:" + std::string(ah::removal_pattern_name(pattern)));
    const auto s = ah::trace_keys(anchor, keys);
    report.add_tau(ah::tau_statistics(s, f.a, f.w));
    report.add_xi(ah::xi_statistics(s, f.a, f.w));
  }
}

int cmd_eval(const CommonFlags& f) {
  const auto config = config_of(f);
  const auto seed = config.seed;
  ah::ScenarioReport report(config.algo == "anchor" && config.tier != ah::Tier::kMinimal
                                ? "anchor-" + f.tier
                                : config.algo,
                            "");
  report.set_scenario("setup");
  report.add("a", f.a);
  report.add("w", f.w);
  report.add("seed", static_cast<double>(seed));

  auto balancer = ah::make_balancer(config, ah::numbered_resources(f.w));
  const auto keys = ah::make_keys(f.keys, seed);

  report.set_scenario("balance");
  for (std::uint64_t n = 10'000; n <= f.keys; n *= 10) {
    const auto c = ah::census(*balancer, std::span(keys).first(n));
    report.add("oversubscription_" + std::to_string(n), ah::oversubscription(c), n);
  }
  {
    const auto c = ah::census(*balancer, keys);
    const auto chi = ah::chi_square_uniform(c.counts);
    report.add("oversubscription", ah::oversubscription(c), c.total);
    report.add("chi_square_statistic", chi.statistic, c.total);
    report.add("chi_square_dof", chi.dof);
    report.add("chi_square_p_value", chi.p_value);
  }

  if (config.algo == "anchor" && keys.size() >= ah::kMinStatisticKeys) {
    switch (config.tier) {
      case ah::Tier::kMinimal: anchor_traces<ah::AnchorHash>(report, f, keys); break;
      case ah::Tier::kReduced: anchor_traces<ah::ReducedAnchor>(report, f, keys); break;
      case ah::Tier::kNaive: anchor_traces<ah::NaiveAnchor>(report, f, keys); break;
    }
  }

  report.set_scenario("churn");
  const auto probe = std::span(keys).first(std::min<std::uint64_t>(keys.size(), 100'000));
  {
    auto before = ah::map_keys(*balancer, probe);
    const auto live = balancer->live_labels();
    const ah::Label victim = live[ah::hash_to_range(seed, 7, live.size())];
    const ah::ResourceId id = balancer->resource(victim);
    balancer->remove_resource(id);
    auto after = ah::map_keys(*balancer, probe);
    report.add_disruption("remove", ah::classify_disruption(before, after, ah::ChurnEvent::kRemove, victim));
    const ah::Label added = balancer->add_resource(id);
    auto back = ah::map_keys(*balancer, probe);
    report.add_disruption("add", ah::classify_disruption(after, back, ah::ChurnEvent::kAdd, added));
  }
  report.set_scenario("update");
  report.add_update_cost(ah::update_cost(*balancer, 100, seed));

  report.set_scenario("throughput");
  const ah::Balancer& b = *balancer;
  report.add("wall_lookup_mkps", ah::lookup_rate_mkps([&b](ah::Key k) { return b.lookup(k); }, probe, 0.5),
             probe.size());
  report.add("threads", ah::kernel_threads());

  emit(f, {report});
  return 0;
}

// ----------------------------------------------------------- snapshot

template <ah::AnchorTier AnchorT>
ah::WrapperSnapshot build_wrapper(const CommonFlags& f) {
  ah::ResourceWrapper<AnchorT> wrapper(f.a, ah::numbered_resources(f.a), f.seed.value_or(0));
  const auto seed = f.seed.value_or(0);
  std::mt19937_64 rng(ah::mix64(seed, 2));
  for (std::uint32_t i = f.w; i < f.a; ++i) {
    const auto live = wrapper.anchor().working_set();
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    wrapper.remove_resource(*wrapper.resource_at(live[pick(rng)]));
  }
  return wrapper.to_snapshot();
}

int cmd_snapshot_save(const CommonFlags& f) {
  if (f.out.empty()) throw CLI::ValidationError("--out", "snapshot save needs --out");
  ah::WrapperSnapshot snap;
  switch (ah::parse_tier(f.tier)) {
    case ah::Tier::kMinimal: snap = build_wrapper<ah::AnchorHash>(f); break;
    case ah::Tier::kReduced: snap = build_wrapper<ah::ReducedAnchor>(f); break;
    case ah::Tier::kNaive: snap = build_wrapper<ah::NaiveAnchor>(f); break;
  }
  ah::write_file(f.out, ah::encode_wrapper_snapshot(snap));
  return 0;
}

int cmd_snapshot_verify(const CommonFlags& f, const std::string& in) {
  const auto snap = ah::decode_wrapper_snapshot(ah::read_file(in));
  const auto balancer = ah::restore_balancer(snap, ah::parse_tier(f.tier));
  const auto keys = ah::make_keys(f.keys, f.seed.value_or(0));
  std::uint64_t digest = 0;
  for (const auto l : ah::map_keys(*balancer, keys)) digest = ah::mix64(digest ^ l, 3);
  nlohmann::json out = {{"tier", f.tier},
                        {"capacity", snap.anchor.capacity},
                        {"working", snap.anchor.working},
                        {"probe_keys", f.keys},
                        {"lookup_digest", digest},
                        {"reencoded_identical", *balancer->encoded_state() == ah::read_file(in)}};
  const std::string text = out.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    ah::write_file(f.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AnchorHash consistent hashing: scenarios, evaluation and snapshots"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string script_path;
  std::uint64_t probe_keys = 10'000;
  auto* run = app.add_subcommand("run", "replay a churn script");
  add_common(run, run_flags);
  run->add_option("--script", script_path, "script file")->required();
  run->add_option("--keys", probe_keys, "probe keys tracked for per-event disruption");

  CommonFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "balance, lookup cost, disruption and update cost for one algorithm");
  add_common(eval, eval_flags);
  eval->add_option("--a", eval_flags.a, "anchor size / resource bound")->check(CLI::PositiveNumber);
  eval->add_option("--w", eval_flags.w, "working resources")->check(CLI::PositiveNumber);
  eval->add_option("--keys", eval_flags.keys, "key sample size")->check(CLI::Range(1ULL, 1ULL << 32));

  CommonFlags snap_flags;
  snap_flags.keys = 10'000;
  std::string snap_in;
  auto* snapshot = app.add_subcommand("snapshot", "write or check a wrapper snapshot");
  snapshot->require_subcommand(1);
  auto* save = snapshot->add_subcommand("save", "build a random-churn state and save it");
  save->add_option("--a", snap_flags.a, "anchor size")->check(CLI::PositiveNumber);
  save->add_option("--w", snap_flags.w, "working resources after churn")->check(CLI::PositiveNumber);
  save->add_option("--tier", snap_flags.tier, "anchor tier")->check(CLI::IsMember({"minimal", "reduced", "naive"}));
  save->add_option("--seed", snap_flags.seed, "hash and churn seed");
  save->add_option("--out", snap_flags.out, "snapshot file")->required();
  auto* verify = snapshot->add_subcommand("verify", "load a snapshot, validate it, print a lookup digest");
  verify->add_option("--in", snap_in, "snapshot file")->required();
  verify->add_option("--tier", snap_flags.tier, "expected tier")->check(CLI::IsMember({"minimal", "reduced", "naive"}));
  verify->add_option("--seed", snap_flags.seed, "seed for the digest keys");
  verify->add_option("--keys", snap_flags.keys, "keys hashed into the digest");
  verify->add_option("--out", snap_flags.out, "write the JSON result here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*run) return cmd_run(run_flags, script_path, probe_keys);
    if (*eval) {
      if (eval_flags.w > eval_flags.a) throw ah::ConfigError("--w must not exceed --a");
      return cmd_eval(eval_flags);
    }
    if (*save) {
      if (snap_flags.w > snap_flags.a) throw ah::ConfigError("--w must not exceed --a");
      return cmd_snapshot_save(snap_flags);
    }
    if (*verify) return cmd_snapshot_verify(snap_flags, snap_in);
  } catch (const ah::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ah::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const ah::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const ah::Error& e) {
    std::cerr << "execution error: " << e.what() << "\n";
    return kExitExecution;
  }
  return 0;
}
