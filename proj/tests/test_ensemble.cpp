#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "epr/ensemble.hpp"
#include "epr/errors.hpp"
#include "epr/stats.hpp"
#include "test_support.hpp"

using namespace epr;
using epr::testing::frequency_band;

namespace {

const auto kUpZ = PureQubitState::up_z();
const auto kDownZ = PureQubitState::down_z();
const auto kUpX = eigenstate(MeasurementAxis::x(), Outcome::kPlus);
const auto kDownX = eigenstate(MeasurementAxis::x(), Outcome::kMinus);

Ensemble make(std::vector<PureQubitState> states, const MeasurementAxis& axis = MeasurementAxis::z()) {
  std::vector<std::size_t> origins(states.size());
  for (std::size_t i = 0; i < origins.size(); ++i) origins[i] = i;
  return Ensemble(std::move(states), {axis, false}, std::move(origins));
}

OutcomeRecord record(std::initializer_list<int> values) {
  OutcomeRecord r;
  for (int v : values) r.outcomes.push_back(v > 0 ? Outcome::kPlus : Outcome::kMinus);
  return r;
}

Ensemble from_outcomes(const OutcomeRecord& r, const MeasurementAxis& axis = MeasurementAxis::z()) {
  std::vector<PureQubitState> states;
  for (auto o : r.outcomes) states.push_back(eigenstate(axis, o));
  return make(std::move(states), axis);
}

}  // namespace

TEST_CASE("prepare_ensemble along z and x") {
  RandomSource rng(4, 0);
  for (const auto& axis : {MeasurementAxis::z(), MeasurementAxis::x()}) {
    auto p = prepare_ensemble(4, axis, rng);
    REQUIRE(p.ensemble.size() == 4);
    REQUIRE(p.record.size() == 4);
    CHECK_FALSE(p.ensemble.label().pruned);
    CHECK(p.ensemble.label().basis_axis == axis);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(p.ensemble.states()[i] == eigenstate(axis, p.record.outcomes[i]));
      CHECK(p.ensemble.origin_indices()[i] == i);
    }
  }
  CHECK_THROWS_AS(prepare_ensemble(0, MeasurementAxis::z(), rng), EmptyEnsembleError);
}

TEST_CASE("single-pair preparations give |up_z> half the time") {
  constexpr std::uint64_t kTrials = 100'000;
  std::uint64_t ups = 0;
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    RandomSource rng(31, t);
    ups += prepare_ensemble(1, MeasurementAxis::z(), rng).ensemble.states()[0] == kUpZ ? 1 : 0;
  }
  CHECK(frequency_band(kTrials, 0.5).contains(static_cast<double>(ups) / kTrials));
}

TEST_CASE("empirical density matrix examples") {
  SUBCASE("balanced z pair is I/2") {
    const auto rho = empirical_density_matrix(make({kUpZ, kDownZ}));
    CHECK(rho.entry(0, 0) == Complex(0.5, 0.0));
    CHECK(rho.entry(1, 1) == Complex(0.5, 0.0));
    CHECK(rho.entry(0, 1) == Complex(0.0, 0.0));
  }
  SUBCASE("three up, one down") {
    const auto rho = empirical_density_matrix(make({kUpZ, kUpZ, kUpZ, kDownZ}));
    CHECK(rho.entry(0, 0) == Complex(0.75, 0.0));
    CHECK(rho.entry(1, 1) == Complex(0.25, 0.0));
    CHECK(rho.entry(0, 1) == Complex(0.0, 0.0));
  }
  SUBCASE("x pair: off-diagonals cancel exactly") {
    const auto rho = empirical_density_matrix(make({kUpX, kDownX}, MeasurementAxis::x()));
    CHECK(rho.entry(0, 0) == Complex(0.5, 0.0));
    CHECK(rho.entry(1, 1) == Complex(0.5, 0.0));
    CHECK(rho.entry(0, 1) == Complex(0.0, 0.0));
    CHECK(rho.entry(1, 0) == Complex(0.0, 0.0));
  }
  CHECK_THROWS_AS(empirical_density_matrix(std::span<const PureQubitState>{}), EmptyEnsembleError);
}

TEST_CASE("property: density matrices are Hermitian, unit trace and positive") {
  RandomSource rng(8, 0);
  for (int i = 0; i < 500; ++i) {
    std::vector<PureQubitState> states;
    const auto n = 1 + rng.uniform_int(0, 20);
    for (std::uint64_t k = 0; k < n; ++k) states.push_back(epr::testing::random_state(rng));
    const auto rho = empirical_density_matrix(states);
    CHECK(std::abs(rho.entry(0, 1) - std::conj(rho.entry(1, 0))) < 1e-12);
    CHECK(std::abs(rho.trace() - Complex(1.0, 0.0)) < 1e-12);
    CHECK(rho.eigenvalues()[0] >= -1e-12);
  }
}

TEST_CASE("imbalance examples") {
  CHECK(imbalance(record({+1, +1, -1, +1})).n_delta == 1);
  CHECK(imbalance(record({+1, -1, +1, -1})).n_delta == 0);
  CHECK(imbalance(record({+1, +1, -1})).n_delta == 0);   // odd: 2 - ceil(3/2)
  CHECK(imbalance(record({+1, +1, +1})).n_delta == 1);
  CHECK(imbalance(record({-1})).n_delta == -1);
  CHECK_THROWS_AS(imbalance(OutcomeRecord{}), EmptyEnsembleError);
}

TEST_CASE("property: z-prepared density matrix diagonal is 1/2 +- n_delta/N") {
  using boost::multiprecision::cpp_rational;
  for (std::uint64_t t = 0; t < 400; ++t) {
    RandomSource rng(15, t);
    const std::size_t n = 2 * (1 + rng.uniform_int(0, 31));
    auto p = prepare_ensemble(n, MeasurementAxis::z(), rng);
    const auto rho = empirical_density_matrix(p.ensemble);
    const auto nd = imbalance(p.record).n_delta;
    // Exact rational form of the fluctuating diagonal.
    const cpp_rational expected_up = cpp_rational(1, 2) + cpp_rational(nd, static_cast<long long>(n));
    const cpp_rational counted(static_cast<long long>(p.record.count(Outcome::kPlus)),
                               static_cast<long long>(n));
    CHECK(expected_up == counted);
    CHECK(rho.entry(0, 0).real() == stats::to_double(expected_up));
    CHECK(rho.entry(1, 1).real() == stats::to_double(1 - expected_up));
    CHECK(rho.entry(0, 1) == Complex(0.0, 0.0));
    CHECK(std::abs(nd) <= static_cast<std::int64_t>(n / 2));
  }
}

TEST_CASE("property: x-prepared fluctuation moves off the diagonal") {
  for (std::uint64_t t = 0; t < 400; ++t) {
    RandomSource rng(16, t);
    const std::size_t n = 2 * (1 + rng.uniform_int(0, 31));
    auto p = prepare_ensemble(n, MeasurementAxis::x(), rng);
    const auto rho = empirical_density_matrix(p.ensemble);
    const auto nd = imbalance(p.record).n_delta;
    CHECK(rho.entry(0, 0) == Complex(0.5, 0.0));
    CHECK(rho.entry(1, 1) == Complex(0.5, 0.0));
    CHECK(rho.entry(0, 1).real() == doctest::Approx(static_cast<double>(nd) / n).epsilon(1e-15));
    CHECK(rho.entry(0, 1).imag() == 0.0);
  }
}

TEST_CASE("prune_to_balance examples") {
  SUBCASE("surplus ups drop from the highest index") {
    const auto rec = record({+1, +1, -1, +1});
    auto pruned = prune_to_balance(from_outcomes(rec), rec);
    CHECK(pruned.discarded == std::vector<std::size_t>{1, 3});
    CHECK(pruned.ensemble.size() == 2);
    CHECK(pruned.ensemble.origin_indices() == std::vector<std::size_t>{0, 2});
    CHECK(pruned.ensemble.label().pruned);
    CHECK(pruned.record == record({+1, -1}));
  }
  SUBCASE("already balanced") {
    const auto rec = record({+1, -1});
    auto pruned = prune_to_balance(from_outcomes(rec), rec);
    CHECK(pruned.discarded.empty());
    CHECK(pruned.ensemble.size() == 2);
  }
  SUBCASE("all identical") {
    const auto rec = record({+1, +1, +1, +1});
    CHECK_THROWS_AS(prune_to_balance(from_outcomes(rec), rec), EmptyEnsembleError);
    const auto one = record({-1});
    CHECK_THROWS_AS(prune_to_balance(from_outcomes(one), one), EmptyEnsembleError);
  }
  SUBCASE("misaligned or repeated") {
    const auto rec = record({+1, -1, +1});
    CHECK_THROWS_AS(prune_to_balance(from_outcomes(rec), record({+1, -1})), AlignmentError);
    auto pruned = prune_to_balance(from_outcomes(rec), rec);
    CHECK_THROWS_AS(prune_to_balance(pruned.ensemble, pruned.record), DomainError);
  }
}

TEST_CASE("property: pruning balances counts and gives exactly I/2") {
  for (std::uint64_t t = 0; t < 500; ++t) {
    RandomSource rng(17, t);
    const auto axis = t % 2 == 0 ? MeasurementAxis::z() : MeasurementAxis::x();
    const std::size_t n = 2 + rng.uniform_int(0, 60);
    auto p = prepare_ensemble(n, axis, rng);
    const auto ups = p.record.count(Outcome::kPlus);
    if (ups == 0 || ups == n) continue;
    auto pruned = prune_to_balance(p.ensemble, p.record);
    // Independent recount from Bob's record minus the discard list.
    std::size_t kept_up = 0;
    std::size_t kept_down = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(pruned.discarded.begin(), pruned.discarded.end(), i) != pruned.discarded.end()) continue;
      (p.record.outcomes[i] == Outcome::kPlus ? kept_up : kept_down) += 1;
    }
    CHECK(kept_up == kept_down);
    CHECK(pruned.ensemble.size() == 2 * std::min(ups, n - ups));
    CHECK(pruned.discarded.size() + pruned.ensemble.size() == n);
    const auto rho = empirical_density_matrix(pruned.ensemble);
    CHECK(rho.is_maximally_mixed());
    CHECK(rho.entry(0, 0) == Complex(0.5, 0.0));
    CHECK(rho.entry(0, 1) == Complex(0.0, 0.0));
    // Alice, given only the discard list, reconstructs the same ensemble.
    const auto alice = apply_discard(p.ensemble, pruned.discarded);
    CHECK(alice.states() == pruned.ensemble.states());
    CHECK(alice.origin_indices() == pruned.ensemble.origin_indices());
  }
}

TEST_CASE("prepare_balanced yields the requested size") {
  RandomSource rng(18, 0);
  for (std::size_t size : {2u, 10u, 100u}) {
    auto prep = prepare_balanced(size, MeasurementAxis::x(), rng);
    CHECK(prep.balanced.ensemble.size() == size);
    CHECK(prep.balanced.record.count(Outcome::kPlus) == size / 2);
    CHECK(prep.raw.ensemble.size() == size + prep.balanced.discarded.size());
  }
  CHECK_THROWS_AS(prepare_balanced(3, MeasurementAxis::z(), rng), DomainError);
  CHECK_THROWS_AS(prepare_balanced(0, MeasurementAxis::z(), rng), DomainError);
}

TEST_CASE("ensemble invariants") {
  CHECK_THROWS_AS(Ensemble({}, {MeasurementAxis::z(), false}, {}), EmptyEnsembleError);
  CHECK_THROWS_AS(Ensemble({kUpZ, kDownZ}, {MeasurementAxis::z(), false}, {1, 1}), AlignmentError);
  CHECK_THROWS_AS(Ensemble({kUpZ, kDownZ}, {MeasurementAxis::z(), false}, {0}), AlignmentError);
  const auto e = make({kUpZ, kDownZ});
  const std::vector<std::size_t> everything{0, 1};
  CHECK_THROWS_AS(apply_discard(e, everything), EmptyEnsembleError);
}

TEST_CASE("imbalance histogram matches the shifted binomial (N = 16)") {
  constexpr std::size_t kN = 16;
  constexpr std::uint64_t kTrials = 100'000;
  stats::Histogram h;
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    RandomSource rng(19, t);
    h.add(imbalance(prepare_ensemble(kN, MeasurementAxis::z(), rng).record).n_delta);
  }
  // n_delta = k - N/2 with k ~ Binomial(N, 1/2); sum = 2 n_delta.
  const auto exact = stats::binomial_exact(kN);
  std::map<std::int64_t, double> expected;
  for (std::int64_t d = -8; d <= 8; ++d) expected[d] = exact.probability(2 * d);
  CHECK(stats::chi_square_gof(h, expected).p_value > 0.001);
}
