// eprsim: batch runner for the Bell-pair ensemble experiments.
//
// Usage:
//   eprsim <prepare|no-signal|distinguish|scaling|timeline> [flags]
//
// Exit codes: 0 success, 1 invalid configuration, 2 internal invariant violation.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "epr/errors.hpp"
#include "epr/experiment.hpp"

namespace {

constexpr const char* kUsage = R"(usage: eprsim <scenario> [flags]

scenarios:
  prepare       prepare ensembles from Bell pairs; imbalance and density matrix
  no-signal     blind distinguisher on unpruned ensembles (accuracy, TV, MI)
  distinguish   fluctuation distinguisher over several copies
  scaling       E|N_delta| against N on the grid 64, 128, ..., n
  timeline      event logs for the signal-attempt, telephone and balanced runs

flags:
  --n <count>          pairs per ensemble / balanced copy size   (default 100;
                       scaling: 4096)
  --trials <count>     independent trials                       (default 10000;
                       timeline: 1)
  --copies <count>     copies per distinguisher verdict          (default 10)
  --basis <spec>       x | z | bloch:theta,phi                   (default z)
  --latency <seconds>  classical channel delay                   (default 1.0)
  --seed <u64>         master seed                               (default 1)
  --prune              balance ensembles via Bob's discard list
  --format <csv|json>  output format                             (default json)
  --out <path>         write the report here instead of stdout
  --config <path>      flat JSON object with the flag names as keys
  --threads <count>    worker threads; output does not depend on it (default 1)
  --no-records         omit per-trial rows
)";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "-h" || a == "--help") {
      std::cout << kUsage;
      return 0;
    }
  }

  epr::cli::ExperimentConfig cfg;
  try {
    cfg = epr::cli::parse_config(args);
  } catch (const epr::ConfigError& e) {
    std::cerr << "eprsim: invalid configuration: " << e.what() << "\n";
    return 1;
  }

  std::string output;
  try {
    output = epr::cli::render(epr::cli::run_experiment(cfg));
  } catch (const epr::ConfigError& e) {
    std::cerr << "eprsim: invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "eprsim: internal error: " << e.what() << "\n";
    return 2;
  }

  if (cfg.out.empty()) {
    std::cout << output;
    return std::cout.good() ? 0 : 2;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    std::cerr << "eprsim: cannot open output file '" << cfg.out << "'\n";
    return 1;
  }
  file << output;
  return file.good() ? 0 : 2;
}
