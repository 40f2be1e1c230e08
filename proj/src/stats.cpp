#include "epr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "epr/errors.hpp"

namespace epr::stats {

namespace mp = boost::multiprecision;

double to_double(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("to_double: zero denominator");
  if (num == 0) return 0.0;
  const bool negative = (num < 0) != (den < 0);
  const BigInt a = mp::abs(num);
  const BigInt b = mp::abs(den);
  // Scale so the integer quotient carries 61-63 significant bits.
  const long long shift = static_cast<long long>(mp::msb(a)) -
                          static_cast<long long>(mp::msb(b)) - 62;
  BigInt q;
  BigInt r;
  if (shift >= 0)
    mp::divide_qr(a, BigInt(b << static_cast<unsigned>(shift)), q, r);
  else
    mp::divide_qr(BigInt(a << static_cast<unsigned>(-shift)), b, q, r);
  if (r != 0) q |= 1;
  const double mantissa = static_cast<double>(q.convert_to<unsigned long long>());
  const double value = std::ldexp(mantissa, static_cast<int>(shift));
  return negative ? -value : value;
}

double to_double(const BigRational& q) {
  return to_double(mp::numerator(q), mp::denominator(q));
}

// ---------------------------------------------------------------------------

SumDistribution::SumDistribution(std::size_t n, std::vector<BigInt> coefficients,
                                 BigInt denominator)
    : n_(n), coefficients_(std::move(coefficients)), denominator_(std::move(denominator)) {}

const BigInt& SumDistribution::weight(std::int64_t sum) const {
  static const BigInt zero = 0;
  const auto n = static_cast<std::int64_t>(n_);
  if (sum < -n || sum > n || (n + sum) % 2 != 0) return zero;
  return coefficients_[static_cast<std::size_t>((n + sum) / 2)];
}

BigRational SumDistribution::exact_probability(std::int64_t sum) const {
  return BigRational(weight(sum), denominator_);
}

double SumDistribution::probability(std::int64_t sum) const {
  const BigInt& w = weight(sum);
  if (w == 0) return 0.0;
  const auto msb = static_cast<long long>(mp::msb(w));
  const long long drop = std::max(0LL, msb - 62);
  const BigInt top = w >> static_cast<unsigned>(drop);
  return std::ldexp(static_cast<double>(top.convert_to<unsigned long long>()),
                    static_cast<int>(drop - static_cast<long long>(n_)));
}

std::map<std::int64_t, double> SumDistribution::probabilities() const {
  std::map<std::int64_t, double> out;
  const auto n = static_cast<std::int64_t>(n_);
  for (std::int64_t s = -n; s <= n; s += 2) out.emplace(s, probability(s));
  return out;
}

BigInt SumDistribution::total_weight() const {
  BigInt total = 0;
  for (const auto& c : coefficients_) total += c;
  return total;
}

SumDistribution binomial_exact(std::size_t n) {
  if (n < 1 || n > kMaxExactN)
    throw DomainError(fmt::format("binomial_exact: n must be in [1, {}], got {}", kMaxExactN, n));
  std::vector<BigInt> c(n + 1);
  c[0] = 1;
  for (std::size_t k = 0; k < n; ++k) c[k + 1] = c[k] * (n - k) / (k + 1);
  BigInt denominator = BigInt(1) << static_cast<unsigned>(n);
  return SumDistribution(n, std::move(c), std::move(denominator));
}

BigRational expected_abs_imbalance_exact(std::size_t n) {
  if (n % 2 != 0)
    throw DomainError(fmt::format("expected_abs_imbalance: n must be even, got {}", n));
  const SumDistribution d = binomial_exact(n);
  BigInt weighted = 0;
  const auto ni = static_cast<std::int64_t>(n);
  for (std::int64_t s = 2; s <= ni; s += 2) weighted += 2 * d.weight(s) * s;  // +-s symmetric
  // |N_delta| = |s| / 2
  return BigRational(weighted, 2 * d.denominator());
}

double expected_abs_imbalance(std::size_t n) { return to_double(expected_abs_imbalance_exact(n)); }

// ---------------------------------------------------------------------------

void Histogram::add(std::int64_t value, std::uint64_t count) {
  if (count == 0) return;
  bins_[value] += count;
  total_ += count;
}

std::uint64_t Histogram::count(std::int64_t value) const {
  auto it = bins_.find(value);
  return it == bins_.end() ? 0 : it->second;
}

double Histogram::frequency(std::int64_t value) const {
  return total_ == 0 ? 0.0 : static_cast<double>(count(value)) / static_cast<double>(total_);
}

double tv_distance(const Histogram& a, const Histogram& b) {
  if (a.total() == 0 || b.total() == 0) throw DomainError("tv_distance: empty histogram");
  const double ta = static_cast<double>(a.total());
  const double tb = static_cast<double>(b.total());
  double sum = 0.0;
  auto ia = a.bins().begin();
  auto ib = b.bins().begin();
  // Merge walk over the union of supports.
  while (ia != a.bins().end() || ib != b.bins().end()) {
    if (ib == b.bins().end() || (ia != a.bins().end() && ia->first < ib->first)) {
      sum += static_cast<double>(ia->second) / ta;
      ++ia;
    } else if (ia == a.bins().end() || ib->first < ia->first) {
      sum += static_cast<double>(ib->second) / tb;
      ++ib;
    } else {
      sum += std::abs(static_cast<double>(ia->second) / ta - static_cast<double>(ib->second) / tb);
      ++ia;
      ++ib;
    }
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double tv_distance(const Histogram& a, const SumDistribution& exact) {
  if (a.total() == 0) throw DomainError("tv_distance: empty histogram");
  const double ta = static_cast<double>(a.total());
  double sum = 0.0;
  double covered = 0.0;  // exact mass on bins present in the histogram
  for (const auto& [value, count] : a.bins()) {
    const double p = exact.probability(value);
    covered += p;
    sum += std::abs(static_cast<double>(count) / ta - p);
  }
  sum += std::max(0.0, 1.0 - covered);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square_gof(const Histogram& observed,
                               const std::map<std::int64_t, double>& expected,
                               double min_expected) {
  if (observed.total() == 0) throw DomainError("chi_square_gof: empty histogram");
  if (expected.empty()) throw DomainError("chi_square_gof: empty expected distribution");
  const double total = static_cast<double>(observed.total());

  // Observations outside the expected support make the fit impossible.
  for (const auto& [value, count] : observed.bins()) {
    auto it = expected.find(value);
    if (it == expected.end() || it->second <= 0.0)
      return {std::numeric_limits<double>::infinity(), 0, 0.0};
  }

  std::vector<std::pair<double, double>> cells;  // (expected count, observed count)
  double e_acc = 0.0;
  double o_acc = 0.0;
  for (const auto& [value, p] : expected) {
    e_acc += p * total;
    o_acc += static_cast<double>(observed.count(value));
    if (e_acc >= min_expected) {
      cells.emplace_back(e_acc, o_acc);
      e_acc = 0.0;
      o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (cells.empty()) cells.emplace_back(0.0, 0.0);
    cells.back().first += e_acc;
    cells.back().second += o_acc;
  }
  if (cells.size() < 2) throw DomainError("chi_square_gof: fewer than two cells after pooling");

  double stat = 0.0;
  for (const auto& [e, o] : cells) stat += (o - e) * (o - e) / e;
  const std::size_t dof = cells.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

// ---------------------------------------------------------------------------

JointCounts::JointCounts(std::size_t columns) {
  if (columns == 0) throw DomainError("JointCounts: need at least one column");
  rows_[0].assign(columns, 0);
  rows_[1].assign(columns, 0);
}

void JointCounts::add(std::size_t row, std::size_t column, std::uint64_t count) {
  if (row > 1 || column >= columns())
    throw DomainError(fmt::format("JointCounts: cell ({}, {}) out of range", row, column));
  rows_[row][column] += count;
}

std::uint64_t JointCounts::at(std::size_t row, std::size_t column) const {
  return rows_.at(row).at(column);
}

std::uint64_t JointCounts::total() const {
  return std::accumulate(rows_[0].begin(), rows_[0].end(), std::uint64_t{0}) +
         std::accumulate(rows_[1].begin(), rows_[1].end(), std::uint64_t{0});
}

double mutual_information_bits(const JointCounts& j) {
  const std::uint64_t total = j.total();
  if (total == 0) throw DomainError("mutual_information_bits: all-zero table");
  const double t = static_cast<double>(total);
  std::array<double, 2> row_sum{};
  std::vector<double> col_sum(j.columns(), 0.0);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < j.columns(); ++c) {
      row_sum[r] += static_cast<double>(j.at(r, c));
      col_sum[c] += static_cast<double>(j.at(r, c));
    }
  double mi = 0.0;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < j.columns(); ++c) {
      const double n = static_cast<double>(j.at(r, c));
      if (n == 0.0) continue;
      mi += (n / t) * std::log2(n * t / (row_sum[r] * col_sum[c]));
    }
  return std::max(0.0, mi);
}

ScalingFitResult scaling_fit(std::span<const ScalingPoint> points) {
  if (points.size() < 3)
    throw DomainError(fmt::format("scaling_fit: need at least 3 points, got {}", points.size()));
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (!(p.n > 0.0) || !(p.value > 0.0))
      throw DomainError(fmt::format("scaling_fit: non-positive point ({}, {})", p.n, p.value));
    xs.push_back(std::log(p.n));
    ys.push_back(std::log(p.value));
  }
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("scaling_fit: all n are equal");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return {slope, my - slope * mx, r2};
}

double variance_estimate(std::span<const std::int64_t> samples) {
  if (samples.size() < 2)
    throw DomainError(fmt::format("variance_estimate: need at least 2 samples, got {}",
                                  samples.size()));
  // Welford
  long double mean = 0.0L;
  long double m2 = 0.0L;
  std::size_t k = 0;
  for (std::int64_t s : samples) {
    ++k;
    const long double x = static_cast<long double>(s);
    const long double d = x - mean;
    mean += d / static_cast<long double>(k);
    m2 += d * (x - mean);
  }
  return static_cast<double>(m2 / static_cast<long double>(samples.size() - 1));
}

}  // namespace epr::stats
