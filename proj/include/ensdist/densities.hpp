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

#ifndef ENSDIST_DENSITIES_HPP_
#define ENSDIST_DENSITIES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "ensdist/ensembles.hpp"
#include "ensdist/errors.hpp"
#include "ensdist/numerics/special.hpp"

namespace ensdist {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

namespace detail {

inline double checked_log_gamma(double x) {
  if (!(x > 0.0)) throw ParameterError("Gamma argument must be positive");
  return log_gamma(x);
}

// beta * sum_{i<j} log|v_i - v_j|; -inf on ties.
inline double log_vandermonde(std::span<const double> v, double beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double gap = std::fabs(v[i] - v[j]);
      if (gap == 0.0) return kNegInf;
      acc += std::log(gap);
    }
  }
  return beta * acc;
}

// exponent * log(x) with the 0 * log 0 = 0 convention at x = 0.
inline double weight_log(double exponent, double x) {
  if (x == 0.0) return exponent == 0.0 ? 0.0 : kNegInf;
  return exponent * std::log(x);
}

}  // namespace detail

/// log C_J, the beta-Jacobi normalizing constant.
inline double log_cj(const EnsembleParams &p) {
  const double eta = p.eta();
  const double a = p.a();
  double acc = 0.0;
  for (int j = 1; j <= p.m(); ++j) {
    const double shift = eta * (p.m() - j);
    acc += detail::checked_log_gamma(1.0 + eta) + detail::checked_log_gamma(a - shift) -
           detail::checked_log_gamma(1.0 + eta * j) -
           detail::checked_log_gamma(p.a1() - shift) -
           detail::checked_log_gamma(p.a2() - shift);
  }
  return acc;
}

/// log C_L, the beta-Laguerre normalizing constant.
inline double log_cl(const EnsembleParams &p) {
  const double eta = p.eta();
  double acc = -p.m() * p.a1() * std::numbers::ln2;
  for (int j = 1; j <= p.m(); ++j) {
    acc += detail::checked_log_gamma(1.0 + eta) - detail::checked_log_gamma(1.0 + eta * j) -
           detail::checked_log_gamma(p.a1() - eta * (p.m() - j));
  }
  return acc;
}

/// Log joint density of the beta-Laguerre ensemble (unordered coordinates).
inline double log_density_laguerre(const EnsembleParams &p, std::span<const double> v) {
  if (v.size() != p.size()) throw ParameterError("point dimension must equal m");
  double sum = 0.0, logs = 0.0;
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
    sum += x;
    logs += std::log(x);
  }
  const double vdm = detail::log_vandermonde(v, p.beta());
  if (vdm == kNegInf) return kNegInf;
  return log_cl(p) + vdm + (p.a1() - p.r()) * logs - 0.5 * sum;
}

/// Log joint density of the beta-Jacobi ensemble on [0, 1]^m.
inline double log_density_jacobi(const EnsembleParams &p, std::span<const double> v) {
  if (v.size() != p.size()) throw ParameterError("point dimension must equal m");
  const double e1 = p.a1() - p.r();
  const double e2 = p.a2() - p.r();
  double acc = 0.0;
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) return kNegInf;
    acc += detail::weight_log(e1, x) + detail::weight_log(e2, 1.0 - x);
    if (acc == kNegInf) return kNegInf;
  }
  const double vdm = detail::log_vandermonde(v, p.beta());
  if (vdm == kNegInf) return kNegInf;
  return log_cj(p) + vdm + acc;
}

/// log K_m = -m a1 log a + sum_{i<m} [lgamma(a - eta i) - lgamma(a2 - eta i)].
/// Each summand is regrouped so the a1 log a subtraction happens inside a
/// log1p, which keeps the total accurate when a2 >> a1 m.
inline double log_km_exact(const EnsembleParams &p) {
  const double eta = p.eta();
  const double a = p.a();
  const double a1 = p.a1();
  const double log_a = std::log(a);
  double acc = 0.0;
  for (int i = 0; i < p.m(); ++i) {
    const double x = p.a2() - eta * i;
    if (!(x > 0.0)) throw ParameterError("Gamma argument a2 - eta i must be positive");
    const double y = x + a1;
    if (x >= detail::kStirlingThreshold) {
      acc += (x - 0.5) * std::log1p(a1 / x) + a1 * std::log1p(-eta * i / a) - a1 +
             (stirling_correction(y) - stirling_correction(x));
    } else {
      acc += log_gamma_ratio(x, a1) - a1 * log_a;
    }
  }
  return acc;
}

/// Leading-order Stirling expansion of log K_m.
inline double log_km_asymptotic(const EnsembleParams &p) {
  const double m = p.m();
  const double a1 = p.a1();
  const double a2 = p.a2();
  const double a = p.a();
  const double u = a1 / a2;
  const double l = std::log1p(u);
  // -a1 m + m (a2 - r/2) log(1 + u), with a2 log(1 + u) - a1 = a2 (l - u).
  const double head = m * (a2 * (l - u) - 0.5 * p.r() * l);
  return head - p.beta() * p.beta() * a1 * m * m * m / (24.0 * a * a);
}

/// m (a2 - r) log(1 + a1/a2), the amount moved between the primed and
/// unprimed pairs.
inline double km_transfer(const EnsembleParams &p) {
  return p.m() * (p.a2() - p.r()) * std::log1p(p.a1() / p.a2());
}

inline double log_km_prime(const EnsembleParams &p) { return log_km_exact(p) - km_transfer(p); }

/// log L_m(v) = sum v / 2 + (a2 - r) sum log(1 - v_i / 2a), or -inf when
/// max v_i >= 2a.
inline double log_lm(const EnsembleParams &p, std::span<const double> v) {
  const double two_a = 2.0 * p.a();
  double half_sum = 0.0, logs = 0.0;
  for (double x : v) {
    if (!(x < two_a)) return kNegInf;
    half_sum += 0.5 * x;
    logs += std::log1p(-x / two_a);
  }
  return half_sum + (p.a2() - p.r()) * logs;
}

struct LogRatioTerms {
  double log_km = 0.0;
  double log_lm = kNegInf;
  double log_km_prime = 0.0;
  double log_lm_prime = kNegInf;
  bool in_support = false;

  /// log(K_m L_m), equal to log(K'_m L'_m).
  double log_ratio() const { return in_support ? log_km_prime + log_lm_prime : kNegInf; }
};

/// log L'_m(v) = sum v / 2 + (a2 - r) sum log1p((2 a1 - v_i) / (2 a2)).
inline double log_lm_prime(const EnsembleParams &p, std::span<const double> v) {
  const double two_a = 2.0 * p.a();
  const double two_a1 = 2.0 * p.a1();
  const double two_a2 = 2.0 * p.a2();
  double half_sum = 0.0, logs = 0.0;
  for (double x : v) {
    if (!(x < two_a)) return kNegInf;
    half_sum += 0.5 * x;
    logs += std::log1p((two_a1 - x) / two_a2);
  }
  return half_sum + (p.a2() - p.r()) * logs;
}

inline LogRatioTerms log_ratio_terms(const EnsembleParams &p, std::span<const double> v) {
  LogRatioTerms t;
  t.log_km = log_km_exact(p);
  t.log_km_prime = t.log_km - km_transfer(p);
  const double two_a = 2.0 * p.a();
  t.in_support = std::all_of(v.begin(), v.end(), [two_a](double x) { return x < two_a; });
  if (!t.in_support) return t;
  t.log_lm_prime = log_lm_prime(p, v);
  t.log_lm = t.log_lm_prime - km_transfer(p);
  return t;
}

/// log L'_m evaluated at the spectrum of a tridiagonal T without
/// diagonalizing it: sum mu = tr T and sum log1p((2a1 - mu_i)/(2a2)) is a
/// log-determinant from the LDL' pivots. Off support (some mu_i >= 2a) the
/// value is -inf.
struct GramLogLmPrime {
  double value = kNegInf;
  bool in_support = false;
};

inline GramLogLmPrime log_lm_prime_from_gram(const EnsembleParams &p,
                                             const SymmetricTridiagonal &t) {
  GramLogLmPrime out;
  const auto det = log_det_unit_shift(t, 2.0 * p.a1(), 2.0 * p.a2());
  if (!det.positive_definite) return out;
  double half_trace = 0.0;
  for (double d : t.diag) half_trace += 0.5 * d;
  out.in_support = true;
  out.value = half_trace + (p.a2() - p.r()) * det.log_det;
  return out;
}

}  // namespace ensdist

#endif  // ENSDIST_DENSITIES_HPP_
