#include "epr/ensemble.hpp"

#include <algorithm>
#include <string>

#include "epr/errors.hpp"

namespace epr {

Ensemble::Ensemble(std::vector<PureQubitState> states, PreparationLabel label,
                   std::vector<std::size_t> origin_indices)
    : states_(std::move(states)), label_(label), origin_indices_(std::move(origin_indices)) {
  if (states_.empty()) throw EmptyEnsembleError("ensemble must contain at least one qubit");
  if (origin_indices_.size() != states_.size())
    throw AlignmentError("ensemble has " + std::to_string(states_.size()) + " states but " +
                         std::to_string(origin_indices_.size()) + " origin indices");
  if (std::adjacent_find(origin_indices_.begin(), origin_indices_.end(),
                         [](std::size_t a, std::size_t b) { return a >= b; }) !=
      origin_indices_.end())
    throw AlignmentError("ensemble origin indices must be strictly increasing");
}

std::size_t OutcomeRecord::count(Outcome o) const {
  return static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), o));
}

EmpiricalDensityMatrix::EmpiricalDensityMatrix(BlochVector bloch_sum, std::size_t count)
    : sum_(bloch_sum),
      count_(static_cast<double>(count)),
      r_{bloch_sum.x / count_ + 0.0, bloch_sum.y / count_ + 0.0, bloch_sum.z / count_ + 0.0} {
  if (count == 0) throw EmptyEnsembleError("EmpiricalDensityMatrix: zero count");
}

Complex EmpiricalDensityMatrix::entry(int row, int col) const {
  const double twice = 2.0 * count_;
  if (row == 0 && col == 0) return {(count_ + sum_.z) / twice, 0.0};
  if (row == 1 && col == 1) return {(count_ - sum_.z) / twice, 0.0};
  if (row == 0 && col == 1) return {sum_.x / twice + 0.0, -sum_.y / twice + 0.0};
  return {sum_.x / twice + 0.0, sum_.y / twice + 0.0};
}

std::array<std::array<Complex, 2>, 2> EmpiricalDensityMatrix::entries() const {
  return {{{entry(0, 0), entry(0, 1)}, {entry(1, 0), entry(1, 1)}}};
}

std::array<double, 2> EmpiricalDensityMatrix::eigenvalues() const {
  const double len = r_.norm();
  return {(1.0 - len) * 0.5, (1.0 + len) * 0.5};
}

PreparedEnsemble prepare_ensemble(std::size_t n, const MeasurementAxis& bob_axis,
                                  RandomSource& rng) {
  if (n == 0) throw EmptyEnsembleError("prepare_ensemble: n must be at least 1");
  const TwoQubitState bell = make_bell_phi_plus();
  std::vector<PureQubitState> states;
  std::vector<std::size_t> origins;
  OutcomeRecord record;
  states.reserve(n);
  origins.reserve(n);
  record.outcomes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = measure_pair_bob(bell, bob_axis, rng);
    states.push_back(m.alice_state);
    origins.push_back(i);
    record.outcomes.push_back(m.bob_outcome);
  }
  return {Ensemble(std::move(states), {bob_axis, false}, std::move(origins)), std::move(record)};
}

EmpiricalDensityMatrix empirical_density_matrix(std::span<const PureQubitState> states) {
  if (states.empty()) throw EmptyEnsembleError("empirical_density_matrix: no states");
  BlochVector sum;
  for (const auto& s : states) {
    const BlochVector r = s.bloch();
    sum.x += r.x;
    sum.y += r.y;
    sum.z += r.z;
  }
  return EmpiricalDensityMatrix(sum, states.size());
}

EmpiricalDensityMatrix empirical_density_matrix(const Ensemble& e) {
  return empirical_density_matrix(std::span<const PureQubitState>(e.states()));
}

Imbalance imbalance(const OutcomeRecord& rec) {
  if (rec.outcomes.empty()) throw EmptyEnsembleError("imbalance: empty outcome record");
  const auto n = static_cast<std::int64_t>(rec.size());
  const auto ups = static_cast<std::int64_t>(rec.count(Outcome::kPlus));
  return {ups - (n + 1) / 2};
}

PruneResult prune_to_balance(const Ensemble& e, const OutcomeRecord& rec) {
  if (e.label().pruned) throw DomainError("prune_to_balance: ensemble is already pruned");
  if (rec.size() != e.size())
    throw AlignmentError("prune_to_balance: record has " + std::to_string(rec.size()) +
                         " outcomes for " + std::to_string(e.size()) + " qubits");

  const std::size_t ups = rec.count(Outcome::kPlus);
  const std::size_t downs = rec.size() - ups;
  const std::size_t keep_each = std::min(ups, downs);
  if (keep_each == 0)
    throw EmptyEnsembleError("prune_to_balance: all " + std::to_string(rec.size()) +
                             " outcomes are identical; nothing to balance against");

  const Outcome surplus = ups > downs ? Outcome::kPlus : Outcome::kMinus;
  std::size_t to_drop = ups > downs ? ups - downs : downs - ups;

  // Walk from the highest origin index down, dropping surplus outcomes.
  std::vector<bool> drop(e.size(), false);
  for (std::size_t i = e.size(); i-- > 0 && to_drop > 0;) {
    if (rec.outcomes[i] == surplus) {
      drop[i] = true;
      --to_drop;
    }
  }

  std::vector<PureQubitState> states;
  std::vector<std::size_t> origins;
  OutcomeRecord kept;
  std::vector<std::size_t> discarded;
  states.reserve(2 * keep_each);
  origins.reserve(2 * keep_each);
  kept.outcomes.reserve(2 * keep_each);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (drop[i]) {
      discarded.push_back(e.origin_indices()[i]);
      continue;
    }
    states.push_back(e.states()[i]);
    origins.push_back(e.origin_indices()[i]);
    kept.outcomes.push_back(rec.outcomes[i]);
  }
  PreparationLabel label = e.label();
  label.pruned = true;
  return {Ensemble(std::move(states), label, std::move(origins)), std::move(kept),
          std::move(discarded)};
}

BalancedPreparation prepare_balanced(std::size_t balanced_size, const MeasurementAxis& bob_axis,
                                     RandomSource& rng) {
  if (balanced_size == 0 || balanced_size % 2 != 0)
    throw DomainError("prepare_balanced: size must be even and positive, got " +
                      std::to_string(balanced_size));
  const std::size_t half = balanced_size / 2;
  const TwoQubitState bell = make_bell_phi_plus();

  std::vector<PureQubitState> states;
  std::vector<std::size_t> origins;
  OutcomeRecord record;
  std::size_t ups = 0;
  std::size_t downs = 0;
  while (ups < half || downs < half) {
    auto m = measure_pair_bob(bell, bob_axis, rng);
    (m.bob_outcome == Outcome::kPlus ? ups : downs) += 1;
    origins.push_back(states.size());
    states.push_back(m.alice_state);
    record.outcomes.push_back(m.bob_outcome);
  }
  PreparedEnsemble raw{Ensemble(std::move(states), {bob_axis, false}, std::move(origins)),
                       std::move(record)};
  PruneResult balanced = prune_to_balance(raw.ensemble, raw.record);
  return {std::move(raw), std::move(balanced)};
}

Ensemble apply_discard(const Ensemble& e, std::span<const std::size_t> discarded) {
  std::vector<PureQubitState> states;
  std::vector<std::size_t> origins;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::size_t origin = e.origin_indices()[i];
    if (std::binary_search(discarded.begin(), discarded.end(), origin)) continue;
    states.push_back(e.states()[i]);
    origins.push_back(origin);
  }
  if (states.empty()) throw EmptyEnsembleError("apply_discard: every qubit was discarded");
  PreparationLabel label = e.label();
  label.pruned = true;
  return Ensemble(std::move(states), label, std::move(origins));
}

}  // namespace epr
