#include "epr/experiment.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

#include "epr/ensemble.hpp"
#include "epr/errors.hpp"
#include "epr/parallel.hpp"
#include "epr/protocols.hpp"
#include "epr/random.hpp"
#include "epr/stats.hpp"

namespace epr::cli {

namespace {

double find_value(const std::vector<NamedValue>& values, std::string_view name) {
  for (const auto& v : values)
    if (v.name == name) return v.value;
  throw std::out_of_range(fmt::format("no report value named '{}'", name));
}

double as_double(std::size_t v) { return static_cast<double>(v); }

double ratio(std::size_t num, std::size_t den) { return as_double(num) / as_double(den); }

// P(sum of n fair +-1 outcomes == 0), or nothing when n is outside the exact range.
std::optional<double> zero_sum_probability(std::size_t n) {
  if (n > stats::kMaxExactN) return std::nullopt;
  if (n % 2 != 0) return 0.0;
  return stats::binomial_exact(n).probability(0);
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareTrial {
  std::int64_t n_delta = 0;
  double rho00 = 0.0;
  double rho11 = 0.0;
  Complex rho01;
  bool diagonal_holds = true;
  std::size_t balanced_size = 0;
  std::size_t discarded = 0;
  bool balanced_mixed = false;
  bool prune_failed = false;
};

void run_prepare(const ExperimentConfig& cfg, ExperimentReport& report) {
  const MeasurementAxis axis = cfg.axis();
  const bool z_basis = axis == MeasurementAxis::z();
  const auto trials = map_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    RandomSource rng(cfg.seed, kZPrepStreams + t);
    auto prepared = prepare_ensemble(cfg.n, axis, rng);
    const auto rho = empirical_density_matrix(prepared.ensemble);
    PrepareTrial r;
    r.n_delta = imbalance(prepared.record).n_delta;
    r.rho00 = rho.entry(0, 0).real();
    r.rho11 = rho.entry(1, 1).real();
    r.rho01 = rho.entry(0, 1);
    if (z_basis && cfg.n % 2 == 0) {
      const auto half = static_cast<std::int64_t>(cfg.n / 2);
      const double n = as_double(cfg.n);
      r.diagonal_holds = r.rho00 == static_cast<double>(half + r.n_delta) / n &&
                    r.rho11 == static_cast<double>(half - r.n_delta) / n;
    }
    if (cfg.prune) {
      try {
        auto pruned = prune_to_balance(prepared.ensemble, prepared.record);
        r.balanced_size = pruned.ensemble.size();
        r.discarded = pruned.discarded.size();
        r.balanced_mixed = empirical_density_matrix(pruned.ensemble).is_maximally_mixed();
      } catch (const EmptyEnsembleError&) {
        r.prune_failed = true;
      }
    }
    return r;
  });

  double sum_abs = 0.0;
  std::vector<std::int64_t> deltas;
  std::size_t diagonal_failures = 0;
  std::size_t mixed = 0;
  std::size_t failed = 0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& r = trials[t];
    sum_abs += std::abs(static_cast<double>(r.n_delta));
    deltas.push_back(r.n_delta);
    diagonal_failures += r.diagonal_holds ? 0 : 1;
    mixed += r.balanced_mixed ? 1 : 0;
    failed += r.prune_failed ? 1 : 0;
    if (!cfg.records) continue;
    report.records.push_back({t, cfg.n, "n_delta", static_cast<double>(r.n_delta)});
    report.records.push_back({t, cfg.n, "rho_00", r.rho00});
    report.records.push_back({t, cfg.n, "rho_11", r.rho11});
    report.records.push_back({t, cfg.n, "rho_01_re", r.rho01.real()});
    report.records.push_back({t, cfg.n, "rho_01_im", r.rho01.imag()});
    if (cfg.prune) {
      report.records.push_back({t, cfg.n, "balanced_size", as_double(r.balanced_size)});
      report.records.push_back({t, cfg.n, "discarded", as_double(r.discarded)});
    }
  }
  report.summary.push_back({"mean_abs_n_delta", sum_abs / as_double(cfg.trials)});
  if (cfg.trials >= 2)
    report.summary.push_back({"var_n_delta", stats::variance_estimate(deltas)});
  if (z_basis && cfg.n % 2 == 0) report.summary.push_back({"diagonal_mismatches", as_double(diagonal_failures)});
  if (cfg.prune) {
    report.summary.push_back({"balanced_maximally_mixed", as_double(mixed)});
    report.summary.push_back({"prune_failures", as_double(failed)});
  }

  if (cfg.n % 2 == 0 && cfg.n <= stats::kMaxExactN)
    report.oracle.push_back({"mean_abs_n_delta", stats::expected_abs_imbalance(cfg.n)});
  report.oracle.push_back({"var_n_delta", as_double(cfg.n) / 4.0});
  if (cfg.prune) {
    // Pruning fails only when every outcome agrees.
    report.oracle.push_back({"prune_failure_probability", std::ldexp(1.0, 1 - static_cast<int>(cfg.n))});
  }
}

// ---------------------------------------------------------------------------
// no-signal

struct NoSignalTrial {
  std::int64_t sigma_z_prep = 0;
  std::int64_t sigma_x_prep = 0;
};

std::size_t sign_column(std::int64_t v) { return v < 0 ? 0 : (v == 0 ? 1 : 2); }

void run_no_signal(const ExperimentConfig& cfg, ExperimentReport& report) {
  const MeasurementAxis strategy = cfg.axis();
  const auto trials = map_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    NoSignalTrial r;
    // Bob's bit 1 -> z, bit 0 -> x; Alice never receives anything.
    RandomSource z_rng(cfg.seed, kZPrepStreams + t);
    auto z_prep = preskill_signal_attempt(1, cfg.n, z_rng);
    r.sigma_z_prep = sigma_sum(z_prep.ensemble.states(), strategy, z_rng).value;
    RandomSource x_rng(cfg.seed, kXPrepStreams + t);
    auto x_prep = preskill_signal_attempt(0, cfg.n, x_rng);
    r.sigma_x_prep = sigma_sum(x_prep.ensemble.states(), strategy, x_rng).value;
    return r;
  });

  stats::Histogram hz;
  stats::Histogram hx;
  stats::JointCounts joint(3);
  std::size_t correct_z = 0;
  std::size_t correct_x = 0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& r = trials[t];
    hz.add(r.sigma_z_prep);
    hx.add(r.sigma_x_prep);
    joint.add(1, sign_column(r.sigma_z_prep));
    joint.add(0, sign_column(r.sigma_x_prep));
    // Blind rule: guess z-prepared iff the sum is zero.
    correct_z += r.sigma_z_prep == 0 ? 1 : 0;
    correct_x += r.sigma_x_prep != 0 ? 1 : 0;
    if (!cfg.records) continue;
    report.records.push_back({t, cfg.n, "sigma_zprep", static_cast<double>(r.sigma_z_prep)});
    report.records.push_back({t, cfg.n, "sigma_xprep", static_cast<double>(r.sigma_x_prep)});
  }
  const double accuracy = ratio(correct_z + correct_x, 2 * cfg.trials);
  report.summary.push_back({"accuracy", accuracy});
  report.summary.push_back({"accuracy_zprep", ratio(correct_z, cfg.trials)});
  report.summary.push_back({"accuracy_xprep", ratio(correct_x, cfg.trials)});
  report.summary.push_back({"tv_distance", stats::tv_distance(hz, hx)});
  report.summary.push_back({"mutual_information_bits", stats::mutual_information_bits(joint)});

  report.oracle.push_back({"accuracy", 0.5});
  if (const auto p0 = zero_sum_probability(cfg.n)) {
    const double var = 2.0 * (*p0) * (1.0 - *p0);
    report.oracle.push_back({"accuracy_3sigma", 3.0 * std::sqrt(var / (4.0 * as_double(cfg.trials)))});
    report.oracle.push_back({"p_sigma_zero", *p0});
  }
  report.oracle.push_back({"mutual_information_bits", 0.0});
  if (cfg.n <= stats::kMaxExactN) {
    const auto exact = stats::binomial_exact(cfg.n);
    report.summary.push_back({"tv_zprep_to_exact", stats::tv_distance(hz, exact)});
    report.summary.push_back({"tv_xprep_to_exact", stats::tv_distance(hx, exact)});
  }
}

// ---------------------------------------------------------------------------
// distinguish

struct DistinguishTrial {
  bool z_correct = false;
  bool x_correct = false;
  std::vector<std::int64_t> z_sums;
  std::vector<std::int64_t> x_sums;
};

std::vector<std::vector<PureQubitState>> make_copies(const ExperimentConfig& cfg,
                                                     const MeasurementAxis& bob_axis,
                                                     RandomSource& rng) {
  std::vector<std::vector<PureQubitState>> copies;
  copies.reserve(cfg.copies);
  for (std::size_t c = 0; c < cfg.copies; ++c) {
    if (cfg.prune) {
      // Alice applies Bob's discard list to the qubits she holds.
      auto prep = prepare_balanced(cfg.n, bob_axis, rng);
      copies.push_back(apply_discard(prep.raw.ensemble, prep.balanced.discarded).states());
    } else {
      copies.push_back(prepare_ensemble(cfg.n, bob_axis, rng).ensemble.states());
    }
  }
  return copies;
}

void run_distinguish(const ExperimentConfig& cfg, ExperimentReport& report) {
  const MeasurementAxis alice_axis = cfg.axis();
  const auto trials = map_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    DistinguishTrial r;
    RandomSource z_rng(cfg.seed, kZPrepStreams + t);
    const auto z_copies = make_copies(cfg, MeasurementAxis::z(), z_rng);
    const auto z_verdict = despagnat_distinguish(z_copies, alice_axis, z_rng);
    r.z_correct = z_verdict.guess == PreparationGuess::kZPrepared;
    for (const auto& s : z_verdict.evidence) r.z_sums.push_back(s.value);

    RandomSource x_rng(cfg.seed, kXPrepStreams + t);
    const auto x_copies = make_copies(cfg, MeasurementAxis::x(), x_rng);
    const auto x_verdict = despagnat_distinguish(x_copies, alice_axis, x_rng);
    r.x_correct = x_verdict.guess == PreparationGuess::kXPrepared;
    for (const auto& s : x_verdict.evidence) r.x_sums.push_back(s.value);
    return r;
  });

  std::size_t z_ok = 0;
  std::size_t x_ok = 0;
  std::size_t nonzero_z_sums = 0;
  std::vector<std::int64_t> x_sums;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& r = trials[t];
    z_ok += r.z_correct ? 1 : 0;
    x_ok += r.x_correct ? 1 : 0;
    for (auto s : r.z_sums) nonzero_z_sums += s != 0 ? 1 : 0;
    x_sums.insert(x_sums.end(), r.x_sums.begin(), r.x_sums.end());
    if (!cfg.records) continue;
    report.records.push_back({t, cfg.n, "correct_zprep", r.z_correct ? 1.0 : 0.0});
    report.records.push_back({t, cfg.n, "correct_xprep", r.x_correct ? 1.0 : 0.0});
  }
  report.summary.push_back({"accuracy_zprep", ratio(z_ok, cfg.trials)});
  report.summary.push_back({"accuracy_xprep", ratio(x_ok, cfg.trials)});
  report.summary.push_back({"errors_zprep", as_double(cfg.trials - z_ok)});
  report.summary.push_back({"errors_xprep", as_double(cfg.trials - x_ok)});
  report.summary.push_back({"nonzero_sigma_zprep", as_double(nonzero_z_sums)});
  if (x_sums.size() >= 2) report.summary.push_back({"var_sigma_xprep", stats::variance_estimate(x_sums)});

  // The oracle below assumes Alice measures along z.
  if (alice_axis != MeasurementAxis::z()) return;
  if (const auto p0 = zero_sum_probability(cfg.n)) {
    const double k = as_double(cfg.copies);
    const double miss = std::pow(*p0, k);
    report.oracle.push_back({"p_sigma_zero_per_copy", *p0});
    report.oracle.push_back({"error_xprep", miss});
    report.oracle.push_back({"accuracy_xprep", 1.0 - miss});
    report.oracle.push_back({"accuracy_zprep", cfg.prune ? 1.0 : miss});
  }
  report.oracle.push_back({"var_sigma_xprep", as_double(cfg.n)});
}

// ---------------------------------------------------------------------------
// scaling

std::vector<std::size_t> scaling_grid(std::size_t n_max) {
  std::vector<std::size_t> grid;
  for (std::size_t n = 64; n <= n_max; n *= 2) grid.push_back(n);
  return grid;
}

void run_scaling(const ExperimentConfig& cfg, ExperimentReport& report) {
  const MeasurementAxis axis = cfg.axis();
  const auto grid = scaling_grid(cfg.n);
  std::vector<stats::ScalingPoint> empirical;
  std::vector<stats::ScalingPoint> exact;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::size_t n = grid[g];
    const auto abs_deltas = map_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
      RandomSource rng(cfg.seed, g * kStreamBlock + t);
      const auto prepared = prepare_ensemble(n, axis, rng);
      return std::abs(imbalance(prepared.record).n_delta);
    });
    double sum = 0.0;
    for (std::size_t t = 0; t < abs_deltas.size(); ++t) {
      sum += static_cast<double>(abs_deltas[t]);
      if (cfg.records) report.records.push_back({t, n, "abs_n_delta", static_cast<double>(abs_deltas[t])});
    }
    const double mean = sum / as_double(cfg.trials);
    const double oracle = stats::expected_abs_imbalance(n);
    empirical.push_back({as_double(n), mean});
    exact.push_back({as_double(n), oracle});
    report.summary.push_back({fmt::format("mean_abs_n_delta@{}", n), mean});
    report.oracle.push_back({fmt::format("mean_abs_n_delta@{}", n), oracle});
  }
  bool fittable = true;
  for (const auto& p : empirical) fittable = fittable && p.value > 0.0;
  if (fittable) {
    const auto fit = stats::scaling_fit(empirical);
    report.summary.push_back({"exponent", fit.exponent});
    report.summary.push_back({"intercept", fit.intercept});
    report.summary.push_back({"r_squared", fit.r_squared});
  }
  const auto oracle_fit = stats::scaling_fit(exact);
  report.oracle.push_back({"exponent", oracle_fit.exponent});
  report.oracle.push_back({"r_squared", oracle_fit.r_squared});
}

// ---------------------------------------------------------------------------
// timeline

constexpr std::array<TimelineScenario, 3> kTimelines{
    TimelineScenario::kSignalAttempt, TimelineScenario::kTelephone,
    TimelineScenario::kBalancedDistinguish};

void run_timelines(const ExperimentConfig& cfg, ExperimentReport& report) {
  const auto logs = map_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    std::vector<EventLog> out;
    for (std::size_t s = 0; s < kTimelines.size(); ++s) {
      RandomSource rng(cfg.seed, s * kStreamBlock + t);
      out.push_back(run_timeline(kTimelines[s], cfg.n, cfg.latency, rng, cfg.copies));
    }
    return out;
  });

  std::size_t causal = 0;
  std::size_t runs = 0;
  for (std::size_t t = 0; t < logs.size(); ++t) {
    for (std::size_t s = 0; s < kTimelines.size(); ++s) {
      const EventLog& log = logs[t][s];
      const std::string name(to_string(kTimelines[s]));
      ++runs;
      causal += log.satisfies_causality() ? 1 : 0;
      double decision_time = 0.0;
      for (const auto& e : log.events())
        if (e.kind == "decision") decision_time = e.timestamp;
      if (cfg.records) {
        report.records.push_back({t, cfg.n, name + ".decision_time", decision_time});
        report.records.push_back({t, cfg.n, name + ".messages", as_double(log.messages().size())});
      }
      for (const auto& e : log.events())
        report.events.push_back({t, name, e.timestamp, std::string(to_string(e.actor)), e.kind, e.detail});
    }
  }
  report.summary.push_back({"runs", as_double(runs)});
  report.summary.push_back({"causal_runs", as_double(causal)});
  report.oracle.push_back({"causal_runs", as_double(runs)});
}

}  // namespace

double ExperimentReport::summary_value(std::string_view name) const { return find_value(summary, name); }
double ExperimentReport::oracle_value(std::string_view name) const { return find_value(oracle, name); }

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport report;
  report.config = cfg;
  switch (cfg.scenario) {
    case Scenario::kPrepare: run_prepare(cfg, report); break;
    case Scenario::kNoSignal: run_no_signal(cfg, report); break;
    case Scenario::kDistinguish: run_distinguish(cfg, report); break;
    case Scenario::kScaling: run_scaling(cfg, report); break;
    case Scenario::kTimeline: run_timelines(cfg, report); break;
  }
  return report;
}

}  // namespace epr::cli
