#pragma once

#include <array>
#include <complex>
#include <utility>

#include "epr/random.hpp"

namespace epr {

using Complex = std::complex<double>;

/// Tolerance on the squared norm accepted without complaint.
inline constexpr double kNormTolerance = 1e-9;
/// Inputs whose norm deviates by less than this are renormalized; beyond it
/// they are rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  BlochVector operator-() const { return {-x, -y, -z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Measurement direction on the Bloch sphere. Always unit length.
class MeasurementAxis {
 public:
  /// Throws InvalidAxisError unless |bloch| is within kRenormalizeTolerance
  /// of 1. Near-unit inputs are rescaled.
  explicit MeasurementAxis(BlochVector bloch);
  MeasurementAxis(double x, double y, double z) : MeasurementAxis(BlochVector{x, y, z}) {}

  static MeasurementAxis x() { return MeasurementAxis(1.0, 0.0, 0.0); }
  static MeasurementAxis y() { return MeasurementAxis(0.0, 1.0, 0.0); }
  static MeasurementAxis z() { return MeasurementAxis(0.0, 0.0, 1.0); }
  /// Polar angle theta from +z, azimuth phi from +x (radians).
  static MeasurementAxis from_angles(double theta, double phi);

  const BlochVector& bloch() const noexcept { return bloch_; }
  MeasurementAxis reversed() const { return MeasurementAxis(-bloch_); }

  friend bool operator==(const MeasurementAxis&, const MeasurementAxis&) = default;

 private:
  BlochVector bloch_;
};

/// Eigenvalue of a spin measurement.
enum class Outcome : int { kPlus = +1, kMinus = -1 };

inline int value_of(Outcome o) noexcept { return static_cast<int>(o); }
inline Outcome flipped(Outcome o) noexcept {
  return o == Outcome::kPlus ? Outcome::kMinus : Outcome::kPlus;
}

/// Normalized single-qubit state a|up_z> + b|down_z>.
class PureQubitState {
 public:
  /// Throws InvalidStateError when the norm is off by more than
  /// kRenormalizeTolerance; near-unit inputs are rescaled.
  PureQubitState(Complex amp_up, Complex amp_down);

  static PureQubitState up_z() { return {1.0, 0.0}; }
  static PureQubitState down_z() { return {0.0, 1.0}; }

  /// Canonical pure state pointing along `direction`. Equivalent to the
  /// plus-eigenstate returned by axis_eigenstates.
  static PureQubitState along(const MeasurementAxis& direction);

  Complex amp_up() const noexcept { return amp_up_; }
  Complex amp_down() const noexcept { return amp_down_; }

  /// Bloch vector <sigma_x>, <sigma_y>, <sigma_z>, each clamped to [-1, 1].
  BlochVector bloch() const;

  /// Bit-exact amplitude comparison.
  friend bool operator==(const PureQubitState&, const PureQubitState&) = default;

 private:
  Complex amp_up_;
  Complex amp_down_;
};

/// Two-qubit pure state. Amplitudes are indexed [alice][bob] with 0 = up_z.
class TwoQubitState {
 public:
  using Amplitudes = std::array<std::array<Complex, 2>, 2>;

  explicit TwoQubitState(const Amplitudes& amps);

  static TwoQubitState product(const PureQubitState& alice, const PureQubitState& bob);

  Complex amp(int alice, int bob) const { return amps_[alice][bob]; }
  const Amplitudes& amps() const noexcept { return amps_; }

 private:
  Amplitudes amps_;
};

/// (|up up> + |down down>) / sqrt(2).
TwoQubitState make_bell_phi_plus();

/// (plus-eigenstate, minus-eigenstate) of spin along `axis`. Phases are fixed
/// so that amp_up is real and non-negative, or amp_down is real positive when
/// amp_up vanishes.
std::pair<PureQubitState, PureQubitState> axis_eigenstates(const MeasurementAxis& axis);

/// Eigenstate of `axis` belonging to `outcome`.
PureQubitState eigenstate(const MeasurementAxis& axis, Outcome outcome);

/// Probability of outcome +1 when measuring `state` along `axis`.
double born_single(const PureQubitState& state, const MeasurementAxis& axis);

struct SingleMeasurement {
  Outcome outcome;
  PureQubitState post_state;
};

/// Projective measurement; post_state is exactly the eigenstate for the
/// sampled outcome.
SingleMeasurement measure_single(const PureQubitState& state, const MeasurementAxis& axis,
                                 RandomSource& rng);

struct PairMeasurement {
  Outcome bob_outcome;
  PureQubitState alice_state;
};

/// Bob measures his half of `pair` along `axis`; returns his outcome and the
/// state Alice's qubit collapses to.
PairMeasurement measure_pair_bob(const TwoQubitState& pair, const MeasurementAxis& axis,
                                 RandomSource& rng);

}  // namespace epr
