#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "epr/quantum.hpp"
#include "epr/random.hpp"

namespace epr {

/// How an ensemble was made. Ground truth for scoring only; distinguishers
/// never see it.
struct PreparationLabel {
  MeasurementAxis basis_axis;
  bool pruned = false;
};

/// Alice's qubits, in pair order, together with the indices of the Bell pairs
/// they came from.
class Ensemble {
 public:
  /// Throws EmptyEnsembleError when `states` is empty, AlignmentError when
  /// the index list has a different length or is not strictly increasing.
  Ensemble(std::vector<PureQubitState> states, PreparationLabel label,
           std::vector<std::size_t> origin_indices);

  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<PureQubitState>& states() const noexcept { return states_; }
  const PreparationLabel& label() const noexcept { return label_; }
  const std::vector<std::size_t>& origin_indices() const noexcept { return origin_indices_; }

 private:
  std::vector<PureQubitState> states_;
  PreparationLabel label_;
  std::vector<std::size_t> origin_indices_;
};

/// Bob's outcomes, index-aligned with the ensemble they prepared.
struct OutcomeRecord {
  std::vector<Outcome> outcomes;

  std::size_t size() const noexcept { return outcomes.size(); }
  std::size_t count(Outcome o) const;
  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

/// Signed surplus of +1 outcomes over half the ensemble.
struct Imbalance {
  std::int64_t n_delta = 0;
};

/// 2x2 density matrix in the z basis, stored through its Bloch vector:
/// rho = (I + r . sigma) / 2.
class EmpiricalDensityMatrix {
 public:
  /// From the sum of `count` Bloch vectors. Throws EmptyEnsembleError for count 0.
  EmpiricalDensityMatrix(BlochVector bloch_sum, std::size_t count);

  /// Entry <i|rho|j>, with 0 = up_z and 1 = down_z.
  Complex entry(int row, int col) const;
  std::array<std::array<Complex, 2>, 2> entries() const;
  Complex trace() const { return entry(0, 0) + entry(1, 1); }
  /// Ascending eigenvalues (1 -+ |r|) / 2.
  std::array<double, 2> eigenvalues() const;
  const BlochVector& bloch() const noexcept { return r_; }
  bool is_maximally_mixed() const { return r_.x == 0.0 && r_.y == 0.0 && r_.z == 0.0; }

 private:
  BlochVector sum_;
  double count_;
  BlochVector r_;
};

struct PreparedEnsemble {
  Ensemble ensemble;
  OutcomeRecord record;
};

/// Measures Bob's half of `n` fresh |Phi+> pairs along `bob_axis`.
/// Throws EmptyEnsembleError when n == 0.
PreparedEnsemble prepare_ensemble(std::size_t n, const MeasurementAxis& bob_axis,
                                  RandomSource& rng);

/// (1/N) sum_i |psi_i><psi_i|, averaged over Bloch vectors.
EmpiricalDensityMatrix empirical_density_matrix(std::span<const PureQubitState> states);
EmpiricalDensityMatrix empirical_density_matrix(const Ensemble& e);

/// n_delta = #(+1) - N/2 for even N, #(+1) - ceil(N/2) for odd N.
Imbalance imbalance(const OutcomeRecord& rec);

struct PruneResult {
  Ensemble ensemble;
  OutcomeRecord record;
  /// Origin indices removed, ascending. This is the classical message Bob
  /// sends to Alice.
  std::vector<std::size_t> discarded;
};

/// Drops surplus qubits (highest origin index first) until +1 and -1 counts
/// match. Throws EmptyEnsembleError when fewer than two qubits would remain,
/// AlignmentError when `rec` does not describe `e`, DomainError when `e` was
/// already pruned.
PruneResult prune_to_balance(const Ensemble& e, const OutcomeRecord& rec);

struct BalancedPreparation {
  /// Everything Bob measured, as Alice holds it before the discard message.
  PreparedEnsemble raw;
  PruneResult balanced;
};

/// Draws pairs until `balanced_size / 2` of each outcome have been seen, then
/// prunes. The balanced ensemble has exactly `balanced_size` qubits. Throws
/// DomainError for odd or zero sizes.
BalancedPreparation prepare_balanced(std::size_t balanced_size, const MeasurementAxis& bob_axis,
                                     RandomSource& rng);

/// Alice's side of pruning: keep only qubits whose origin index is not in
/// `discarded` (ascending). Throws EmptyEnsembleError if nothing remains.
Ensemble apply_discard(const Ensemble& e, std::span<const std::size_t> discarded);

}  // namespace epr
