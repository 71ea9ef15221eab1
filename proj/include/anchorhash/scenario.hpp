#pragma once

// Line-oriented churn scripts and their runner.
//
//   # comment
//   seed 42
//   init a=2000 w=1000            (or: init a=8 resources=s0,s1,s2)
//   remove 17                     (or: remove random)
//   add                           (or: add <resource>)
//   lookup_batch 100000
//   measure oversubscription,tau,xi
//   dump-state [path]
//
// Blank lines and text after '#' are ignored. `seed` may only precede init.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchorhash/balancer.hpp"
#include "anchorhash/errors.hpp"
#include "anchorhash/evaluation.hpp"

namespace anchorhash {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ExecutionError : public Error {
 public:
  ExecutionError(std::size_t event, std::size_t line, const std::string& what)
      : Error("event " + std::to_string(event) + " (line " + std::to_string(line) + "): " + what),
        event_(event) {}
  std::size_t event() const noexcept { return event_; }

 private:
  std::size_t event_;
};

enum class EventKind { kInit, kRemove, kAdd, kLookupBatch, kMeasure, kDumpState };

std::string_view event_kind_name(EventKind kind) noexcept;

struct ScenarioEvent {
  EventKind kind = EventKind::kInit;
  std::size_t line = 0;
  std::uint32_t capacity = 0;           // init
  std::uint32_t working = 0;            // init
  std::vector<std::string> resources;   // init, explicit names
  std::optional<std::string> resource;  // remove / add; empty = random / auto
  std::uint64_t count = 0;              // lookup_batch
  std::vector<std::string> metrics;     // measure
  std::optional<std::string> path;      // dump-state
};

struct ScenarioScript {
  std::optional<std::uint64_t> seed;
  std::vector<ScenarioEvent> events;
};

inline constexpr std::string_view kMeasureMetrics[] = {
    "oversubscription", "chi_square", "tau", "xi", "update_cost", "disruption", "throughput", "state"};

// Throws ParseError naming the offending line. An empty script is an error.
ScenarioScript parse_script(std::string_view text);
ScenarioScript load_script(const std::filesystem::path& path);

struct RunOptions {
  BalancerConfig config;          // algo, tier, copies, table_size; capacity comes from init
  std::uint64_t seed = 0;         // used when the script has no seed line
  std::uint64_t probe_keys = 10'000;  // keys tracked for per-event disruption
  double throughput_seconds = 0.2;
};

// Replays the script. Precondition failures raise ExecutionError with the
// event index (0-based). IntegrityError and ConfigError (bad algorithm
// parameters) propagate unchanged.
ScenarioReport run_scenario(const ScenarioScript& script, const RunOptions& options);

}  // namespace anchorhash
