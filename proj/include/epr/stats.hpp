#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace epr::stats {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Largest n for which the exact (big-integer) oracles are evaluated.
inline constexpr std::size_t kMaxExactN = 10'000;

/// num / den rounded to double, for arbitrarily large operands.
double to_double(const BigInt& num, const BigInt& den);
double to_double(const BigRational& q);

/// Exact law of the sum of n independent, fair +-1 outcomes:
/// P(sum = s) = C(n, (n + s) / 2) / 2^n when s has the parity of n.
class SumDistribution {
 public:
  std::size_t n() const noexcept { return n_; }

  /// C(n, (n + s) / 2), or 0 off the support.
  const BigInt& weight(std::int64_t sum) const;
  /// 2^n.
  const BigInt& denominator() const noexcept { return denominator_; }

  BigRational exact_probability(std::int64_t sum) const;
  double probability(std::int64_t sum) const;

  /// sum -> probability over the whole support, ascending.
  std::map<std::int64_t, double> probabilities() const;

  /// Exact sum of all weights; equals denominator() by construction.
  BigInt total_weight() const;

 private:
  friend SumDistribution binomial_exact(std::size_t n);
  SumDistribution(std::size_t n, std::vector<BigInt> coefficients, BigInt denominator);

  std::size_t n_;
  std::vector<BigInt> coefficients_;  // indexed by number of +1 outcomes
  BigInt denominator_;
};

/// Throws DomainError unless 1 <= n <= kMaxExactN.
SumDistribution binomial_exact(std::size_t n);

/// E|N_delta| with N_delta = sum / 2, for even n. Throws DomainError for odd n.
BigRational expected_abs_imbalance_exact(std::size_t n);
double expected_abs_imbalance(std::size_t n);

/// Integer-valued histogram.
class Histogram {
 public:
  void add(std::int64_t value, std::uint64_t count = 1);
  std::uint64_t count(std::int64_t value) const;
  std::uint64_t total() const noexcept { return total_; }
  const std::map<std::int64_t, std::uint64_t>& bins() const noexcept { return bins_; }
  double frequency(std::int64_t value) const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::map<std::int64_t, std::uint64_t> bins_;
  std::uint64_t total_ = 0;
};

/// Half the L1 distance between normalized histograms. Throws DomainError if
/// either is empty.
double tv_distance(const Histogram& a, const Histogram& b);
/// Same, against an exact distribution.
double tv_distance(const Histogram& a, const SumDistribution& exact);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of `observed` against `expected` (value ->
/// probability). Adjacent cells are pooled from the low end until each holds
/// an expected count of at least `min_expected`.
ChiSquareResult chi_square_gof(const Histogram& observed,
                               const std::map<std::int64_t, double>& expected,
                               double min_expected = 5.0);

/// 2 x K contingency table: row = Bob's bit, column = Alice's statistic.
class JointCounts {
 public:
  explicit JointCounts(std::size_t columns);

  void add(std::size_t row, std::size_t column, std::uint64_t count = 1);
  std::uint64_t at(std::size_t row, std::size_t column) const;
  std::size_t columns() const noexcept { return rows_[0].size(); }
  std::uint64_t total() const;

 private:
  std::array<std::vector<std::uint64_t>, 2> rows_;
};

/// Plug-in mutual information in bits. Throws DomainError for an all-zero table.
double mutual_information_bits(const JointCounts& j);

struct ScalingPoint {
  double n = 0.0;
  double value = 0.0;
};

struct ScalingFitResult {
  double exponent = 0.0;
  double intercept = 0.0;  // natural-log intercept
  double r_squared = 0.0;
};

/// Least squares of log(value) on log(n). Needs at least three points with
/// positive n and value, and at least two distinct n.
ScalingFitResult scaling_fit(std::span<const ScalingPoint> points);

/// Unbiased sample variance. Needs at least two samples.
double variance_estimate(std::span<const std::int64_t> samples);

}  // namespace epr::stats
