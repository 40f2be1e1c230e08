#include <fmt/format.h>
#include <json.hpp>

#include "epr/experiment.hpp"

namespace epr::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_echo(const ExperimentConfig& cfg) {
  ordered_json j;
  j["scenario"] = std::string(to_string(cfg.scenario));
  j["n"] = cfg.n;
  j["trials"] = cfg.trials;
  j["copies"] = cfg.copies;
  j["basis"] = cfg.basis;
  j["latency"] = cfg.latency;
  j["seed"] = cfg.seed;
  j["prune"] = cfg.prune;
  j["format"] = cfg.format == OutputFormat::kCsv ? "csv" : "json";
  j["records"] = cfg.records;
  return j;
}

// Quote a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const ExperimentReport& report) {
  ordered_json j;
  j["config"] = config_echo(report.config);
  ordered_json summary = ordered_json::object();
  for (const auto& v : report.summary) summary[v.name] = v.value;
  j["summary"] = summary;
  ordered_json oracle = ordered_json::object();
  for (const auto& v : report.oracle) oracle[v.name] = v.value;
  j["oracle"] = oracle;
  ordered_json records = ordered_json::array();
  const std::string scenario(to_string(report.config.scenario));
  for (const auto& r : report.records)
    records.push_back({{"trial", r.trial}, {"scenario", scenario}, {"n", r.n},
                       {"statistic", r.statistic}, {"value", r.value}});
  j["records"] = std::move(records);
  if (!report.events.empty()) {
    ordered_json events = ordered_json::array();
    for (const auto& e : report.events)
      events.push_back({{"trial", e.trial}, {"scenario", e.scenario}, {"timestamp", e.timestamp},
                        {"actor", e.actor}, {"kind", e.kind}, {"detail", e.detail}});
    j["events"] = std::move(events);
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const ExperimentReport& report) {
  const std::string scenario(to_string(report.config.scenario));
  const std::size_t n = report.config.n;
  std::string out = "# config: " + config_echo(report.config).dump() + "\n";
  out += "trial,scenario,n,statistic,value\n";
  for (const auto& r : report.records)
    out += fmt::format("{},{},{},{},{}\n", r.trial, scenario, r.n, csv_field(r.statistic), r.value);
  for (const auto& v : report.summary)
    out += fmt::format("summary,{},{},{},{}\n", scenario, n, csv_field(v.name), v.value);
  for (const auto& v : report.oracle)
    out += fmt::format("oracle,{},{},{},{}\n", scenario, n, csv_field(v.name), v.value);
  if (!report.events.empty()) {
    out += "\ntrial,scenario,timestamp,actor,kind,detail\n";
    for (const auto& e : report.events)
      out += fmt::format("{},{},{},{},{},{}\n", e.trial, e.scenario, e.timestamp, e.actor,
                         csv_field(e.kind), csv_field(e.detail));
  }
  return out;
}

std::string render(const ExperimentReport& report) {
  return report.config.format == OutputFormat::kCsv ? to_csv(report) : to_json(report);
}

}  // namespace epr::cli
