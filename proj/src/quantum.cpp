#include "epr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epr/errors.hpp"

namespace epr {

namespace {

// Returns the factor to divide by, or throws via `fail` if the norm is out of
// tolerance. A factor of exactly 1 means "leave the input untouched".
template <typename Fail>
double normalization_factor(double norm_sq, Fail&& fail) {
  if (!std::isfinite(norm_sq)) fail("non-finite norm");
  const double norm = std::sqrt(norm_sq);
  const double deviation = std::abs(norm - 1.0);
  if (deviation <= kNormTolerance) return 1.0;
  if (deviation <= kRenormalizeTolerance) return norm;
  fail("norm " + std::to_string(norm) + " is not 1");
  return 1.0;
}

// Drops negative zeros.
Complex canonical(Complex z) { return {z.real() + 0.0, z.imag() + 0.0}; }

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

MeasurementAxis::MeasurementAxis(BlochVector bloch) {
  const double factor = normalization_factor(
      bloch.x * bloch.x + bloch.y * bloch.y + bloch.z * bloch.z,
      [](const std::string& why) { throw InvalidAxisError("invalid measurement axis: " + why); });
  if (factor != 1.0) {
    bloch.x /= factor;
    bloch.y /= factor;
    bloch.z /= factor;
  }
  bloch_ = {bloch.x + 0.0, bloch.y + 0.0, bloch.z + 0.0};
}

MeasurementAxis MeasurementAxis::from_angles(double theta, double phi) {
  const double s = std::sin(theta);
  return MeasurementAxis(s * std::cos(phi), s * std::sin(phi), std::cos(theta));
}

PureQubitState::PureQubitState(Complex amp_up, Complex amp_down) {
  const double factor = normalization_factor(
      std::norm(amp_up) + std::norm(amp_down),
      [](const std::string& why) { throw InvalidStateError("invalid qubit state: " + why); });
  if (factor != 1.0) {
    amp_up /= factor;
    amp_down /= factor;
  }
  amp_up_ = canonical(amp_up);
  amp_down_ = canonical(amp_down);
}

PureQubitState PureQubitState::along(const MeasurementAxis& direction) {
  return axis_eigenstates(direction).first;
}

BlochVector PureQubitState::bloch() const {
  const Complex coherence = std::conj(amp_up_) * amp_down_;
  return {clamp_unit(2.0 * coherence.real()), clamp_unit(2.0 * coherence.imag()),
          clamp_unit(std::norm(amp_up_) - std::norm(amp_down_))};
}

TwoQubitState::TwoQubitState(const Amplitudes& amps) : amps_(amps) {
  double norm_sq = 0.0;
  for (const auto& row : amps_)
    for (const auto& a : row) norm_sq += std::norm(a);
  const double factor = normalization_factor(
      norm_sq, [](const std::string& why) { throw InvalidStateError("invalid pair state: " + why); });
  for (auto& row : amps_)
    for (auto& a : row) a = canonical(a / factor);
}

TwoQubitState TwoQubitState::product(const PureQubitState& alice, const PureQubitState& bob) {
  const Complex a[2] = {alice.amp_up(), alice.amp_down()};
  const Complex b[2] = {bob.amp_up(), bob.amp_down()};
  Amplitudes amps{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) amps[i][j] = a[i] * b[j];
  return TwoQubitState(amps);
}

TwoQubitState make_bell_phi_plus() {
  const double h = std::sqrt(0.5);
  return TwoQubitState(TwoQubitState::Amplitudes{{{h, 0.0}, {0.0, h}}});
}

std::pair<PureQubitState, PureQubitState> axis_eigenstates(const MeasurementAxis& axis) {
  const BlochVector& n = axis.bloch();
  // cos(theta/2) and sin(theta/2) straight from the z component.
  const double c = std::sqrt(std::max(0.0, (1.0 + n.z) * 0.5));
  const double s = std::sqrt(std::max(0.0, (1.0 - n.z) * 0.5));
  const double rho = std::hypot(n.x, n.y);
  const double px = rho > 0.0 ? n.x / rho : 1.0;
  const double py = rho > 0.0 ? n.y / rho : 0.0;

  PureQubitState plus = c == 0.0 ? PureQubitState(0.0, 1.0)
                                 : PureQubitState(c, Complex(px * s, py * s));
  PureQubitState minus = s == 0.0 ? PureQubitState(0.0, 1.0)
                                  : PureQubitState(s, Complex(-px * c, -py * c));
  return {plus, minus};
}

PureQubitState eigenstate(const MeasurementAxis& axis, Outcome outcome) {
  auto [plus, minus] = axis_eigenstates(axis);
  return outcome == Outcome::kPlus ? plus : minus;
}

double born_single(const PureQubitState& state, const MeasurementAxis& axis) {
  const PureQubitState plus = axis_eigenstates(axis).first;
  const Complex overlap =
      std::conj(plus.amp_up()) * state.amp_up() + std::conj(plus.amp_down()) * state.amp_down();
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

SingleMeasurement measure_single(const PureQubitState& state, const MeasurementAxis& axis,
                                 RandomSource& rng) {
  auto [plus, minus] = axis_eigenstates(axis);
  const Complex overlap =
      std::conj(plus.amp_up()) * state.amp_up() + std::conj(plus.amp_down()) * state.amp_down();
  const double p_plus = std::clamp(std::norm(overlap), 0.0, 1.0);
  if (rng.uniform() < p_plus) return {Outcome::kPlus, plus};
  return {Outcome::kMinus, minus};
}

PairMeasurement measure_pair_bob(const TwoQubitState& pair, const MeasurementAxis& axis,
                                 RandomSource& rng) {
  auto [plus, minus] = axis_eigenstates(axis);

  // Alice's unnormalized conditional state <e|_B |pair>.
  auto conditional = [&pair](const PureQubitState& e) {
    const Complex e0 = std::conj(e.amp_up());
    const Complex e1 = std::conj(e.amp_down());
    return std::array<Complex, 2>{e0 * pair.amp(0, 0) + e1 * pair.amp(0, 1),
                                  e0 * pair.amp(1, 0) + e1 * pair.amp(1, 1)};
  };

  const auto v_plus = conditional(plus);
  const double p_plus = std::clamp(std::norm(v_plus[0]) + std::norm(v_plus[1]), 0.0, 1.0);
  const bool got_plus = rng.uniform() < p_plus;
  const auto v = got_plus ? v_plus : conditional(minus);

  // Canonicalize through the Bloch direction.
  const double n2 = std::norm(v[0]) + std::norm(v[1]);
  if (!(n2 > 0.0)) throw InvariantViolation("measure_pair_bob: sampled a zero-probability outcome");
  const Complex coherence = std::conj(v[0]) * v[1];
  const BlochVector r{clamp_unit(2.0 * coherence.real() / n2),
                      clamp_unit(2.0 * coherence.imag() / n2),
                      clamp_unit((std::norm(v[0]) - std::norm(v[1])) / n2)};
  return {got_plus ? Outcome::kPlus : Outcome::kMinus,
          PureQubitState::along(MeasurementAxis(r))};
}

}  // namespace epr
