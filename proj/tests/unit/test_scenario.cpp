#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "anchorhash/scenario.hpp"
#include "anchorhash/snapshot.hpp"
#include "anchorhash/wrapper.hpp"

namespace ah = anchorhash;
namespace fs = std::filesystem;

namespace {

ah::RunOptions options(const std::string& algo = "anchor", std::uint64_t probe = 10'000) {
  ah::RunOptions o;
  o.config.algo = algo;
  o.probe_keys = probe;
  o.throughput_seconds = 0.01;
  return o;
}

std::string deterministic_csv(const ah::ScenarioReport& r) {
  std::vector<ah::MetricRow> rows;
  for (const auto& row : r.rows()) {
    if (!row.wall_clock()) rows.push_back(row);
  }
  return ah::to_csv(rows);
}

std::size_t parse_error_line(std::string_view text) {
  try {
    ah::parse_script(text);
  } catch (const ah::ParseError& e) {
    return e.line();
  }
  return 0;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("anchorhash_cli_" + std::to_string(::getpid()) + "_" + name);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ANCHORHASH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) { ah::write_file(p, text); }

constexpr const char* kChurnScript = R"(# churn with measurements
seed 9
init a=64 w=40
remove random
remove 3
add
add extra
lookup_batch 20000
measure oversubscription,chi_square,tau,xi,update_cost,disruption,throughput
dump-state
)";

}  // namespace

TEST(Script, RepresentationExample) {
  const auto script = ah::parse_script("init a=7 w=7\nremove 6\nremove 5\nremove 1\ndump-state\n");
  const auto report = ah::run_scenario(script, options());
  const auto j = report.to_json();
  const auto& state = j["details"].back()["state"];
  EXPECT_EQ(state["A"], nlohmann::json({0, 4, 0, 0, 0, 5, 6}));
  EXPECT_EQ(j["details"].back()["event"], 4);
}

TEST(Script, ParseErrorsNameTheLine) {
  EXPECT_EQ(parse_error_line(""), 1u);
  EXPECT_EQ(parse_error_line("# only comments\n\n"), 2u);
  EXPECT_EQ(parse_error_line("remove 1\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\nbogus 1\n"), 2u);
  EXPECT_EQ(parse_error_line("init a=7 w=8\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7 w=3 resources=x\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7 resources=x,x\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\n\nlookup_batch 0\n"), 3u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\nmeasure tau,bogus\n"), 2u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\nseed 3\n"), 2u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\nremove\n"), 2u);
  EXPECT_EQ(parse_error_line("init a=x w=7\n"), 1u);
  EXPECT_EQ(parse_error_line("init a=7 w=7\ninit a=7 w=7\n"), 2u);
}

TEST(Script, ParsesEveryEventKind) {
  const auto s = ah::parse_script(kChurnScript);
  EXPECT_EQ(s.seed, 9u);
  ASSERT_EQ(s.events.size(), 8u);
  EXPECT_EQ(s.events[0].capacity, 64u);
  EXPECT_EQ(s.events[0].working, 40u);
  EXPECT_FALSE(s.events[1].resource.has_value());
  EXPECT_EQ(s.events[2].resource, "3");
  EXPECT_FALSE(s.events[3].resource.has_value());
  EXPECT_EQ(s.events[4].resource, "extra");
  EXPECT_EQ(s.events[5].count, 20'000u);
  EXPECT_EQ(s.events[6].metrics.size(), 7u);
  EXPECT_EQ(s.events[7].line, 10u);
}

TEST(Script, ExecutionErrorsNameTheEvent) {
  auto expect_event = [](const char* text, std::size_t event) {
    try {
      ah::run_scenario(ah::parse_script(text), options());
      ADD_FAILURE() << "no error for: " << text;
    } catch (const ah::ExecutionError& e) {
      EXPECT_EQ(e.event(), event) << e.what();
    }
  };
  expect_event("init a=4 w=2\nremove 0\nremove 7\n", 2);
  expect_event("init a=4 w=2\nremove 0\nremove 1\n", 2);
  expect_event("init a=2 w=2\nadd\n", 1);
  expect_event("init a=4 w=2\nadd 1\n", 1);
  expect_event("init a=4 w=2\nlookup_batch 100\nmeasure tau\n", 2);
}

TEST(Script, DeterministicForFixedSeed) {
  const auto script = ah::parse_script(kChurnScript);
  for (const char* algo : {"anchor", "hrw", "ring", "maglev"}) {
    SCOPED_TRACE(algo);
    auto s = script;
    if (std::string(algo) != "anchor") {
      s.events[6].metrics = {"oversubscription", "disruption", "update_cost"};
    }
    const auto a = deterministic_csv(ah::run_scenario(s, options(algo)));
    const auto b = deterministic_csv(ah::run_scenario(s, options(algo)));
    EXPECT_EQ(a, b);
    s.seed = 10;
    EXPECT_NE(deterministic_csv(ah::run_scenario(s, options(algo))), a);
  }
}

TEST(Script, AnchorChurnHasNoWrongfulMoves) {
  const auto report = ah::run_scenario(ah::parse_script(kChurnScript), options());
  bool saw_total = false;
  for (const auto& row : report.rows()) {
    if (row.metric.ends_with("_wrongful")) {
      EXPECT_EQ(row.value, "0") << row.scenario;
    }
    if (row.metric == "update_ops") {
      EXPECT_EQ(row.value, "6");
    }
    saw_total = saw_total || row.metric == "total_legitimate";
  }
  EXPECT_TRUE(saw_total);
}

TEST(Script, AutoNamedAddReusesFreedName) {
  const auto report = ah::run_scenario(ah::parse_script("init a=7 w=7\nremove 6\nremove 1\nadd\n"), options());
  const auto& rows = report.rows();
  auto value = [&](const std::string& scenario, const std::string& metric) {
    for (const auto& r : rows) {
      if (r.scenario == scenario && r.metric == metric) return r.value;
    }
    return std::string("<missing>");
  };
  EXPECT_EQ(value("e3:add", "resource"), "1");
  EXPECT_EQ(value("e3:add", "label"), "1");
}

TEST(Script, DumpStateWritesSnapshotFiles) {
  const auto bin = temp_path("state.bin");
  const auto json = temp_path("state.json");
  const auto text = "init a=16 w=10\nremove 2\ndump-state " + bin.string() + "\ndump-state " + json.string() + "\n";
  ah::run_scenario(ah::parse_script(text), options());
  const auto snap = ah::decode_wrapper_snapshot(ah::read_file(bin));
  EXPECT_EQ(snap.anchor.working, 9u);
  EXPECT_EQ(snap.pairs.size(), 9u);
  const auto j = nlohmann::json::parse(ah::read_file(json));
  EXPECT_EQ(j["N"], 9);
  fs::remove(bin);
  fs::remove(json);
}

// --------------------------------------------------------------------- CLI

TEST(Cli, ExitCodes) {
  const auto good = temp_path("good.txt");
  const auto empty = temp_path("empty.txt");
  const auto broken = temp_path("broken.txt");
  const auto failing = temp_path("failing.txt");
  const auto out = temp_path("out.csv");
  write(good, "init a=7 w=7\nremove 6\nremove 5\nremove 1\ndump-state\n");
  write(empty, "");
  write(broken, "init a=7 w=7\nfrobnicate\n");
  write(failing, "init a=7 w=7\nremove 9\n");

  EXPECT_EQ(run_cli("run --script " + good.string() + " --out " + out.string()), 0);
  EXPECT_EQ(ah::read_file(out).rfind("algorithm,scenario,metric,value,samples,std_error\n", 0), 0u);
  EXPECT_EQ(run_cli("run --script " + good.string() + " --format json"), 0);
  EXPECT_EQ(run_cli("run --script " + empty.string()), 2);
  EXPECT_EQ(run_cli("run --script " + broken.string()), 2);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(run_cli("run --script " + good.string() + " --format xml"), 2);
  EXPECT_EQ(run_cli("run --script " + failing.string()), 3);
  EXPECT_EQ(run_cli("run --script " + good.string() + " --algo maglev --table-size 1000"), 2);
  EXPECT_EQ(run_cli("eval --a 64 --w 32 --keys 20000 --algo ring"), 0);
  EXPECT_EQ(run_cli("eval --a 64 --w 32 --keys 20000 --tier naive"), 0);
  for (const auto& p : {good, empty, broken, failing, out}) fs::remove(p);
}

TEST(Cli, SnapshotSaveVerify) {
  const auto snap = temp_path("snap.bin");
  const auto report = temp_path("verify.json");
  ASSERT_EQ(run_cli("snapshot save --a 100 --w 60 --seed 4 --tier reduced --out " + snap.string()), 0);
  ASSERT_EQ(run_cli("snapshot verify --in " + snap.string() + " --tier reduced --out " + report.string()), 0);
  const auto j = nlohmann::json::parse(ah::read_file(report));
  EXPECT_EQ(j["working"], 60);
  EXPECT_EQ(j["reencoded_identical"], true);

  EXPECT_EQ(run_cli("snapshot verify --in " + snap.string() + " --tier minimal"), 4);
  auto bytes = ah::read_file(snap);
  ah::write_file(snap, bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(run_cli("snapshot verify --in " + snap.string() + " --tier reduced"), 4);
  bytes[bytes.size() / 3] ^= 0x01;
  ah::write_file(snap, bytes);
  EXPECT_EQ(run_cli("snapshot verify --in " + snap.string() + " --tier reduced"), 4);
  fs::remove(snap);
  fs::remove(report);
}
