#pragma once

// Shared helpers for the test binaries: Monte Carlo tolerance bands and
// random generators for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "epr/quantum.hpp"
#include "epr/random.hpp"

namespace epr::testing {

/// Mean +- k standard deviations of a Binomial(trials, p) frequency.
struct Band {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

inline Band frequency_band(std::uint64_t trials, double p, double k = 3.0) {
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {p - k * sd, p + k * sd};
}

/// Uniform direction on the sphere.
inline MeasurementAxis random_axis(RandomSource& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return MeasurementAxis(r * std::cos(phi), r * std::sin(phi), z);
}

/// Random axis in the x-z plane.
inline MeasurementAxis random_xz_axis(RandomSource& rng) {
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return MeasurementAxis(std::sin(theta), 0.0, std::cos(theta));
}

/// Random pure state built straight from amplitudes (not via an axis).
inline PureQubitState random_state(RandomSource& rng) {
  const double a = rng.uniform() * std::numbers::pi / 2.0;
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  return PureQubitState(std::cos(a), std::polar(std::sin(a), phase));
}

}  // namespace epr::testing
