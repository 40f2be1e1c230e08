#include <doctest.h>

#include <cmath>
#include <vector>

#include "epr/errors.hpp"
#include "epr/quantum.hpp"
#include "test_support.hpp"

using namespace epr;
using epr::testing::frequency_band;

namespace {

const double kH = std::sqrt(0.5);

// Joint Born probability of (alice, bob) outcomes in the z basis.
double joint_z_probability(const TwoQubitState& s, int alice, int bob) {
  return std::norm(s.amp(alice, bob));
}

}  // namespace

TEST_CASE("Bell state amplitudes and joint z probabilities") {
  const auto bell = make_bell_phi_plus();
  CHECK(bell.amp(0, 0) == Complex(kH, 0.0));
  CHECK(bell.amp(0, 1) == Complex(0.0, 0.0));
  CHECK(bell.amp(1, 0) == Complex(0.0, 0.0));
  CHECK(bell.amp(1, 1) == Complex(kH, 0.0));
  CHECK(joint_z_probability(bell, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(joint_z_probability(bell, 0, 1) == 0.0);
}

TEST_CASE("axis eigenstates for the coordinate axes") {
  SUBCASE("z") {
    auto [plus, minus] = axis_eigenstates(MeasurementAxis::z());
    CHECK(plus == PureQubitState(1.0, 0.0));
    CHECK(minus == PureQubitState(0.0, 1.0));
  }
  SUBCASE("x") {
    auto [plus, minus] = axis_eigenstates(MeasurementAxis::x());
    CHECK(plus.amp_up() == Complex(kH, 0.0));
    CHECK(plus.amp_down() == Complex(kH, 0.0));
    CHECK(minus.amp_up() == Complex(kH, 0.0));
    CHECK(minus.amp_down() == Complex(-kH, 0.0));
  }
  SUBCASE("reversed z swaps the eigenstates") {
    auto [plus, minus] = axis_eigenstates(MeasurementAxis(0.0, 0.0, -1.0));
    CHECK(plus == PureQubitState::down_z());
    CHECK(minus == PureQubitState::up_z());
  }
}

TEST_CASE("axis validation") {
  CHECK_THROWS_AS(MeasurementAxis(1.0, 1.0, 0.0), InvalidAxisError);
  CHECK_THROWS_AS(MeasurementAxis(0.0, 0.0, 0.0), InvalidAxisError);
  CHECK_THROWS_AS(MeasurementAxis(std::nan(""), 0.0, 1.0), InvalidAxisError);
  // Slightly off unit length is rescaled.
  const MeasurementAxis a(0.0, 0.0, 1.0 + 5e-7);
  CHECK(a.bloch().z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PureQubitState(1.0, 1.0), InvalidStateError);
}

TEST_CASE("eigenstates are orthonormal and follow the phase convention") {
  RandomSource rng(7, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto axis = epr::testing::random_axis(rng);
    auto [plus, minus] = axis_eigenstates(axis);
    for (const auto& s : {plus, minus}) {
      CHECK(std::norm(s.amp_up()) + std::norm(s.amp_down()) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s.amp_up().imag() == 0.0);
      CHECK(s.amp_up().real() >= 0.0);
      if (s.amp_up() == Complex(0.0, 0.0)) CHECK(s.amp_down() == Complex(1.0, 0.0));
    }
    const Complex overlap =
        std::conj(plus.amp_up()) * minus.amp_up() + std::conj(plus.amp_down()) * minus.amp_down();
    CHECK(std::abs(overlap) < 1e-12);
    // plus points along the axis
    const auto r = plus.bloch();
    CHECK(r.x == doctest::Approx(axis.bloch().x).epsilon(1e-9));
    CHECK(r.z == doctest::Approx(axis.bloch().z).epsilon(1e-9));
  }
}

TEST_CASE("born_single examples") {
  CHECK(born_single(PureQubitState::up_z(), MeasurementAxis::z()) == 1.0);
  CHECK(born_single(PureQubitState::up_z(), MeasurementAxis::x()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(born_single(PureQubitState::along(MeasurementAxis::x()), MeasurementAxis::x()) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("property: born probabilities along an axis and its reverse sum to one") {
  RandomSource rng(11, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto s = epr::testing::random_state(rng);
    const auto a = epr::testing::random_axis(rng);
    const double p = born_single(s, a);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(std::abs(p + born_single(s, a.reversed()) - 1.0) < 1e-12);
  }
}

TEST_CASE("measure_single on eigenstates is deterministic") {
  RandomSource rng(3, 0);
  const auto down_x = eigenstate(MeasurementAxis::x(), Outcome::kMinus);
  for (int i = 0; i < 1000; ++i) {
    auto m = measure_single(PureQubitState::up_z(), MeasurementAxis::z(), rng);
    CHECK(m.outcome == Outcome::kPlus);
    CHECK(m.post_state == PureQubitState::up_z());
    auto mx = measure_single(down_x, MeasurementAxis::x(), rng);
    CHECK(mx.outcome == Outcome::kMinus);
    CHECK(mx.post_state == down_x);
  }
}

TEST_CASE("measure_single frequency for |up_x> along z stays in the 3 sigma band") {
  constexpr std::uint64_t kTrials = 100'000;
  RandomSource rng(2024, 0);
  const auto up_x = PureQubitState::along(MeasurementAxis::x());
  std::uint64_t ups = 0;
  for (std::uint64_t i = 0; i < kTrials; ++i)
    ups += measure_single(up_x, MeasurementAxis::z(), rng).outcome == Outcome::kPlus ? 1 : 0;
  CHECK(frequency_band(kTrials, 0.5).contains(static_cast<double>(ups) / kTrials));
}

TEST_CASE("property: collapse lands bit-exactly on the outcome's eigenstate") {
  RandomSource rng(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto s = epr::testing::random_state(rng);
    const auto a = epr::testing::random_axis(rng);
    auto m = measure_single(s, a, rng);
    CHECK(m.post_state == eigenstate(a, m.outcome));
  }
}

TEST_CASE("measure_pair_bob on |Phi+>") {
  const auto bell = make_bell_phi_plus();
  RandomSource rng(99, 0);
  for (const auto& axis : {MeasurementAxis::z(), MeasurementAxis::x()}) {
    constexpr std::uint64_t kTrials = 20'000;
    std::uint64_t ups = 0;
    for (std::uint64_t i = 0; i < kTrials; ++i) {
      auto m = measure_pair_bob(bell, axis, rng);
      CHECK(m.alice_state == eigenstate(axis, m.bob_outcome));
      ups += m.bob_outcome == Outcome::kPlus ? 1 : 0;
    }
    CHECK(frequency_band(kTrials, 0.5).contains(static_cast<double>(ups) / kTrials));
  }
}

TEST_CASE("measure_pair_bob on an x-z plane axis leaves Alice in Bob's eigenstate") {
  const auto bell = make_bell_phi_plus();
  RandomSource rng(12, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto axis = epr::testing::random_xz_axis(rng);
    auto m = measure_pair_bob(bell, axis, rng);
    const auto expected = eigenstate(axis, m.bob_outcome);
    CHECK(std::abs(m.alice_state.amp_up() - expected.amp_up()) < 1e-12);
    CHECK(std::abs(m.alice_state.amp_down() - expected.amp_down()) < 1e-12);
  }
}

TEST_CASE("measure_pair_bob on a product state is deterministic") {
  const auto pair = TwoQubitState::product(PureQubitState::up_z(), PureQubitState::up_z());
  RandomSource rng(1, 1);
  for (int i = 0; i < 100; ++i) {
    auto m = measure_pair_bob(pair, MeasurementAxis::z(), rng);
    CHECK(m.bob_outcome == Outcome::kPlus);
    CHECK(m.alice_state == PureQubitState::up_z());
  }
}

TEST_CASE("property: perfect correlation along Bob's axis") {
  const auto bell = make_bell_phi_plus();
  RandomSource rng(77, 0);
  for (const auto& axis : {MeasurementAxis::z(), MeasurementAxis::x()}) {
    for (int i = 0; i < 10'000; ++i) {
      auto bob = measure_pair_bob(bell, axis, rng);
      auto alice = measure_single(bob.alice_state, axis, rng);
      REQUIRE(alice.outcome == bob.bob_outcome);
    }
  }
}

TEST_CASE("property: identical (seed, stream) reproduce outcome sequences") {
  const auto bell = make_bell_phi_plus();
  for (std::uint64_t stream = 0; stream < 20; ++stream) {
    RandomSource a(123, stream);
    RandomSource b(123, stream);
    RandomSource c(123, stream + 1000);
    std::vector<Outcome> sa;
    std::vector<Outcome> sb;
    std::vector<Outcome> sc;
    for (int i = 0; i < 200; ++i) {
      sa.push_back(measure_pair_bob(bell, MeasurementAxis::x(), a).bob_outcome);
      sb.push_back(measure_pair_bob(bell, MeasurementAxis::x(), b).bob_outcome);
      sc.push_back(measure_pair_bob(bell, MeasurementAxis::x(), c).bob_outcome);
    }
    CHECK(sa == sb);
    CHECK(sa != sc);
  }
}
