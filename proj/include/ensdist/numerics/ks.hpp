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

#ifndef ENSDIST_NUMERICS_KS_HPP_
#define ENSDIST_NUMERICS_KS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ensdist/errors.hpp"

namespace ensdist {

/// Result of a Kolmogorov-Smirnov test.
struct KsReport {
  double statistic_d = 0.0;  ///< sup-distance between the two cdfs, in [0, 1]
  double p_value = 1.0;      ///< asymptotic p-value, in [0, 1]
  std::size_t n = 0;         ///< (effective) sample size
};

/// Smallest sample size for which the asymptotic p-value is reported.
inline constexpr std::size_t kKsMinSamples = 100;

/// Survival function of the Kolmogorov distribution, P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double w = -pi2 / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(odd * odd * w);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace detail {

inline double ks_pvalue(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace detail

/// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`.
/// Requires at least kKsMinSamples observations.
template <class Cdf>
KsReport ks_test(std::span<const double> samples, Cdf &&cdf) {
  if (samples.empty()) throw DomainError("ks_test: empty sample");
  if (samples.size() < kKsMinSamples) {
    throw DomainError("ks_test: asymptotic p-value needs at least 100 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  d = std::clamp(d, 0.0, 1.0);
  return {d, detail::ks_pvalue(d, n), sorted.size()};
}

/// Two-sample Kolmogorov-Smirnov test. Both samples need at least
/// kKsMinSamples observations.
inline KsReport ks_two_sample(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() < kKsMinSamples || b.size() < kKsMinSamples) {
    throw DomainError("ks_two_sample: each sample needs at least 100 values");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                              static_cast<double>(j) / ny));
  }
  const double n_eff = nx * ny / (nx + ny);
  return {d, detail::ks_pvalue(d, n_eff),
          static_cast<std::size_t>(std::llround(n_eff))};
}

}  // namespace ensdist

#endif  // ENSDIST_NUMERICS_KS_HPP_
