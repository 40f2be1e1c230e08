#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epr/quantum.hpp"

namespace epr::cli {

enum class Scenario { kPrepare, kNoSignal, kDistinguish, kScaling, kTimeline };
enum class OutputFormat { kCsv, kJson };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// Parses "x", "z" or "bloch:theta,phi" (radians). Throws ConfigError.
MeasurementAxis parse_basis(std::string_view spec);

struct ExperimentConfig {
  Scenario scenario = Scenario::kPrepare;
  std::size_t n = 100;
  std::size_t trials = 10'000;
  std::size_t copies = 10;
  std::string basis = "z";
  double latency = 1.0;
  std::uint64_t seed = 1;
  bool prune = false;
  OutputFormat format = OutputFormat::kJson;
  std::string out;  // empty: stdout
  unsigned threads = 1;
  bool records = true;  // emit per-trial rows

  MeasurementAxis axis() const { return parse_basis(basis); }
};

/// Builds a config from command-line tokens (without the program name). A
/// `--config <path>` JSON file supplies values that explicit flags override.
/// Throws ConfigError naming the offending flag, key or field.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Checks field ranges and scenario/option conflicts. Throws ConfigError.
void validate(const ExperimentConfig& cfg);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::size_t n = 0;
  std::string statistic;
  double value = 0.0;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct TimelineRecord {
  std::uint64_t trial = 0;
  std::string scenario;
  double timestamp = 0.0;
  std::string actor;
  std::string kind;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<NamedValue> summary;
  std::vector<NamedValue> oracle;
  std::vector<TrialRecord> records;
  std::vector<TimelineRecord> events;

  /// First summary/oracle entry called `name`; throws std::out_of_range.
  double summary_value(std::string_view name) const;
  double oracle_value(std::string_view name) const;
};

/// Dispatches on cfg.scenario. Identical configs give identical reports,
/// whatever cfg.threads is.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string to_json(const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);
std::string render(const ExperimentReport& report);

// Stream-id layout: trial t of a scenario uses stream t plus one of these
// offsets for its internal sub-draws.
inline constexpr std::uint64_t kStreamBlock = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kZPrepStreams = 0;
inline constexpr std::uint64_t kXPrepStreams = kStreamBlock;

}  // namespace epr::cli
