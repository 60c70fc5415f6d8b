// Copyright 2026 The ensdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSDIST_NUMERICS_STATS_HPP_
#define ENSDIST_NUMERICS_STATS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "ensdist/errors.hpp"

namespace ensdist {

/// One-pass mean/variance accumulator (Welford update, Chan et al. merge).
/// Merging is associative up to rounding, so sharded reductions give the same
/// answer for a fixed shard plan regardless of scheduling.
class SummaryStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const SummaryStats &other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
  }

  std::uint64_t n() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two observations.
  double variance() const {
    return n_ > 1 ? (m2_ > 0.0 ? m2_ / static_cast<double>(n_ - 1) : 0.0) : 0.0;
  }
  double std_dev() const { return std::sqrt(variance()); }
  double std_error() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

template <class Range>
SummaryStats accumulate(const Range &values) {
  SummaryStats stats;
  for (double x : values) stats.push(x);
  return stats;
}

inline SummaryStats merge(SummaryStats a, const SummaryStats &b) {
  a.merge(b);
  return a;
}

/// A point estimate with its standard error.
struct ValueWithError {
  double value = 0.0;
  double std_error = 0.0;

  /// Signed distance to `target` in units of the standard error.
  double z_score(double target) const {
    return std_error > 0.0 ? (value - target) / std_error
                           : (value == target ? 0.0 : INFINITY);
  }
};

namespace detail {

inline double sample_mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double central_moment(std::span<const double> x, double mean, int k) {
  double s = 0.0;
  for (double v : x) s += std::pow(v - mean, k);
  return s / static_cast<double>(x.size());
}

inline void require_size(std::span<const double> x, std::size_t min_n,
                         const char *who) {
  if (x.size() < min_n) {
    throw DomainError(std::string(who) + ": too few observations");
  }
}

}  // namespace detail

/// Sample mean with standard error sqrt(s^2 / n).
inline ValueWithError mean_with_error(std::span<const double> x) {
  detail::require_size(x, 2, "mean_with_error");
  const SummaryStats stats = accumulate(x);
  return {stats.mean(), stats.std_error()};
}

/// Unbiased sample variance with the fourth-moment standard error
/// sqrt((m4 - m2^2) / n).
inline ValueWithError variance_with_error(std::span<const double> x) {
  detail::require_size(x, 2, "variance_with_error");
  const double n = static_cast<double>(x.size());
  const double mean = detail::sample_mean(x);
  const double m2 = detail::central_moment(x, mean, 2);
  const double m4 = detail::central_moment(x, mean, 4);
  return {m2 * n / (n - 1.0), std::sqrt(std::fmax(m4 - m2 * m2, 0.0) / n)};
}

/// Sample covariance with standard error from the spread of the centred
/// cross products (x - xbar)(y - ybar).
inline ValueWithError covariance_with_error(std::span<const double> x,
                                            std::span<const double> y) {
  detail::require_size(x, 2, "covariance_with_error");
  if (x.size() != y.size()) {
    throw DomainError("covariance_with_error: length mismatch");
  }
  const double n = static_cast<double>(x.size());
  const double mx = detail::sample_mean(x);
  const double my = detail::sample_mean(y);
  SummaryStats products;
  for (std::size_t i = 0; i < x.size(); ++i) {
    products.push((x[i] - mx) * (y[i] - my));
  }
  return {products.mean() * n / (n - 1.0), products.std_error()};
}

/// k-th sample central moment (k = 2, 3, 4) with its delta-method standard
/// error (mu_2k - mu_k^2 - 2k mu_{k-1} mu_{k+1} + k^2 mu_2 mu_{k-1}^2) / n.
inline ValueWithError central_moment_with_error(std::span<const double> x,
                                                int k) {
  detail::require_size(x, 2, "central_moment_with_error");
  if (k < 2 || k > 4) {
    throw DomainError("central_moment_with_error: order must be 2, 3 or 4");
  }
  const double n = static_cast<double>(x.size());
  const double mean = detail::sample_mean(x);
  auto mu = [&](int j) {
    return j <= 1 ? (j == 0 ? 1.0 : 0.0) : detail::central_moment(x, mean, j);
  };
  const double mk = mu(k);
  const double var = mu(2 * k) - mk * mk - 2.0 * k * mu(k - 1) * mu(k + 1) +
                     k * k * mu(2) * mu(k - 1) * mu(k - 1);
  return {mk, std::sqrt(std::fmax(var, 0.0) / n)};
}

}  // namespace ensdist

#endif  // ENSDIST_NUMERICS_STATS_HPP_
