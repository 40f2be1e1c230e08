#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "epr/errors.hpp"
#include "epr/experiment.hpp"
#include "epr/stats.hpp"

namespace epr::cli {

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 5> kScenarioNames{{
    {Scenario::kPrepare, "prepare"},
    {Scenario::kNoSignal, "no-signal"},
    {Scenario::kDistinguish, "distinguish"},
    {Scenario::kScaling, "scaling"},
    {Scenario::kTimeline, "timeline"},
}};

double parse_angle(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(fmt::format("basis: cannot parse angle '{}' in '{}'", text, spec));
  return v;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  throw ConfigError(fmt::format("format: expected csv or json, got '{}'", text));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T json_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(fmt::format("config key '{}': expected a non-negative integer", key));
  return static_cast<T>(v.get<unsigned long long>());
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames)
    if (value == s) return name;
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& [value, n] : kScenarioNames)
    if (n == name) return value;
  return std::nullopt;
}

MeasurementAxis parse_basis(std::string_view spec) {
  if (spec == "x") return MeasurementAxis::x();
  if (spec == "z") return MeasurementAxis::z();
  constexpr std::string_view kPrefix = "bloch:";
  if (spec.substr(0, kPrefix.size()) == kPrefix) {
    const std::string_view angles = spec.substr(kPrefix.size());
    const auto comma = angles.find(',');
    if (comma == std::string_view::npos)
      throw ConfigError(fmt::format("basis: expected bloch:theta,phi, got '{}'", spec));
    return MeasurementAxis::from_angles(parse_angle(angles.substr(0, comma), spec),
                                        parse_angle(angles.substr(comma + 1), spec));
  }
  throw ConfigError(fmt::format("basis: expected x, z or bloch:theta,phi, got '{}'", spec));
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  ExperimentConfig cfg;
  std::string scenario_name;
  std::string format_name = "json";
  std::string config_path;

  CLI::App app{"Bell-pair ensemble experiments", "eprsim"};
  app.set_help_flag();
  app.allow_extras(false);
  auto* o_scenario = app.add_option("scenario", scenario_name);
  auto* o_n = app.add_option("--n", cfg.n);
  auto* o_trials = app.add_option("--trials", cfg.trials);
  auto* o_copies = app.add_option("--copies", cfg.copies);
  auto* o_basis = app.add_option("--basis", cfg.basis);
  auto* o_latency = app.add_option("--latency", cfg.latency);
  auto* o_seed = app.add_option("--seed", cfg.seed);
  auto* o_prune = app.add_flag("--prune", cfg.prune);
  auto* o_format = app.add_option("--format", format_name);
  auto* o_out = app.add_option("--out", cfg.out);
  auto* o_threads = app.add_option("--threads", cfg.threads);
  bool no_records = false;
  auto* o_records = app.add_flag("--no-records", no_records);
  app.add_option("--config", config_path);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(fmt::format("{}: {}", e.get_name(), e.what()));
  }

  bool n_given = o_n->count() > 0;
  bool trials_given = o_trials->count() > 0;
  if (!config_path.empty()) {
    nlohmann::json file;
    try {
      file = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("config '{}': {}", config_path, e.what()));
    }
    if (!file.is_object()) throw ConfigError(fmt::format("config '{}': expected a JSON object", config_path));

    for (const auto& [key, value] : file.items()) {
      auto want_string = [&] {
        if (!value.is_string()) throw ConfigError(fmt::format("config key '{}': expected a string", key));
        return value.get<std::string>();
      };
      auto want_bool = [&] {
        if (!value.is_boolean()) throw ConfigError(fmt::format("config key '{}': expected true or false", key));
        return value.get<bool>();
      };
      if (key == "scenario") {
        if (o_scenario->count() == 0) scenario_name = want_string();
      } else if (key == "n") {
        if (o_n->count() == 0) cfg.n = json_count<std::size_t>(value, key);
      } else if (key == "trials") {
        if (o_trials->count() == 0) cfg.trials = json_count<std::size_t>(value, key);
      } else if (key == "copies") {
        if (o_copies->count() == 0) cfg.copies = json_count<std::size_t>(value, key);
      } else if (key == "basis") {
        if (o_basis->count() == 0) cfg.basis = want_string();
      } else if (key == "latency") {
        if (!value.is_number()) throw ConfigError("config key 'latency': expected a number");
        if (o_latency->count() == 0) cfg.latency = value.get<double>();
      } else if (key == "seed") {
        if (o_seed->count() == 0) cfg.seed = json_count<std::uint64_t>(value, key);
      } else if (key == "prune") {
        if (o_prune->count() == 0) cfg.prune = want_bool();
      } else if (key == "format") {
        if (o_format->count() == 0) format_name = want_string();
      } else if (key == "out") {
        if (o_out->count() == 0) cfg.out = want_string();
      } else if (key == "threads") {
        if (o_threads->count() == 0) cfg.threads = json_count<unsigned>(value, key);
      } else if (key == "records") {
        if (o_records->count() == 0) no_records = !want_bool();
      } else {
        throw ConfigError(fmt::format("config key '{}': unknown option", key));
      }
    }
    n_given = n_given || file.contains("n");
    trials_given = trials_given || file.contains("trials");
  }

  if (scenario_name.empty()) throw ConfigError("scenario: missing (prepare | no-signal | distinguish | scaling | timeline)");
  const auto scenario = parse_scenario(scenario_name);
  if (!scenario) throw ConfigError(fmt::format("scenario: unknown scenario '{}'", scenario_name));
  cfg.scenario = *scenario;
  cfg.format = parse_format(format_name);
  cfg.records = !no_records;

  // Scenario-specific defaults for values the user did not set.
  if (cfg.scenario == Scenario::kScaling && !n_given) cfg.n = 4096;
  if (cfg.scenario == Scenario::kTimeline && !trials_given) cfg.trials = 1;

  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1) throw ConfigError(fmt::format("n: must be >= 1, got {}", cfg.n));
  if (cfg.trials < 1) throw ConfigError(fmt::format("trials: must be >= 1, got {}", cfg.trials));
  if (cfg.copies < 1) throw ConfigError(fmt::format("copies: must be >= 1, got {}", cfg.copies));
  if (!std::isfinite(cfg.latency) || cfg.latency < 0.0)
    throw ConfigError(fmt::format("latency: must be finite and >= 0, got {}", cfg.latency));
  try {
    (void)cfg.axis();
  } catch (const InvalidAxisError& e) {
    throw ConfigError(fmt::format("basis: {}", e.what()));
  }

  switch (cfg.scenario) {
    case Scenario::kPrepare:
      if (cfg.prune && cfg.n < 2)
        throw ConfigError(fmt::format("n: --prune needs n >= 2, got {}", cfg.n));
      break;
    case Scenario::kNoSignal:
      if (cfg.prune)
        throw ConfigError("prune: conflicts with scenario no-signal (it compares unpruned ensembles)");
      break;
    case Scenario::kDistinguish:
      if (cfg.prune && cfg.n % 2 != 0)
        throw ConfigError(fmt::format("n: balanced copies need an even size, got {}", cfg.n));
      break;
    case Scenario::kScaling:
      if (cfg.prune) throw ConfigError("prune: conflicts with scenario scaling (it measures raw imbalance)");
      if (cfg.n < 256 || cfg.n > stats::kMaxExactN)
        throw ConfigError(fmt::format("n: scaling grid runs from 64 up to n; n must be in [256, {}], got {}",
                                      stats::kMaxExactN, cfg.n));
      break;
    case Scenario::kTimeline:
      if (cfg.prune) throw ConfigError("prune: conflicts with scenario timeline (Bob always prunes there)");
      if (cfg.n % 2 != 0)
        throw ConfigError(fmt::format("n: timeline copies need an even size, got {}", cfg.n));
      break;
  }
}

}  // namespace epr::cli
