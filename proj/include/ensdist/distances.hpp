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

#ifndef ENSDIST_DISTANCES_HPP_
#define ENSDIST_DISTANCES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ensdist/densities.hpp"
#include "ensdist/ensembles.hpp"
#include "ensdist/errors.hpp"
#include "ensdist/estimate.hpp"
#include "ensdist/moments.hpp"
#include "ensdist/numerics/ks.hpp"
#include "ensdist/numerics/quadrature.hpp"
#include "ensdist/numerics/rng.hpp"
#include "ensdist/numerics/sharding.hpp"
#include "ensdist/numerics/special.hpp"
#include "ensdist/numerics/stats.hpp"

namespace ensdist {

inline constexpr std::size_t kMinEstimatorSamples = 100;
inline constexpr std::size_t kMinCltReplicates = 500;
/// Jacobi eigenvalues this close to 1 are moved to 1 - kUnitClamp for KL.
inline constexpr double kUnitClamp = 1e-15;
/// Largest tolerated fraction of clamped KL draws.
inline constexpr double kMaxClampedFraction = 1e-3;

// ---------------------------------------------------------------------------
// U_m

/// U_m from the shifted sums S1 = sum (mu - 2a1), S2 = sum (mu - 2a1)^2.
inline double u_statistic_from_sums(const EnsembleParams &p, double s1, double s2) {
  const double a2 = p.a2();
  const double r = p.r();
  return r / (2.0 * a2) * s1 - (a2 - r) / (8.0 * a2 * a2) * s2;
}

inline double u_statistic(const EnsembleParams &p, const Spectrum &mu) {
  if (mu.kind != SpectrumKind::kLaguerre) {
    throw ParameterError("u_statistic: spectrum must be a Laguerre draw");
  }
  if (mu.size() != p.size()) throw ParameterError("u_statistic: spectrum length must be m");
  const double two_a1 = 2.0 * p.a1();
  double s1 = 0.0, s2 = 0.0;
  for (double v : mu.values) {
    s1 += v - two_a1;
    s2 += (v - two_a1) * (v - two_a1);
  }
  return u_statistic_from_sums(p, s1, s2);
}

/// (a2 - r) a1 m r / (2 a2^2) = -E U_m.
inline double u_shift(const EnsembleParams &p) {
  const double a2 = p.a2();
  const double r = p.r();
  return (a2 - r) * p.a1() * p.m() * r / (2.0 * a2 * a2);
}

// ---------------------------------------------------------------------------
// TV and KL

namespace detail {

inline void require_samples(std::size_t n, const char *who) {
  if (n < kMinEstimatorSamples) {
    throw ParameterError(std::string(who) + ": n_samples must be at least 100");
  }
}

inline Estimate finish(const std::vector<double> &values, const RngStream &rng, Metric metric,
                       unsigned shards, std::size_t flagged) {
  const SummaryStats stats = accumulate(values);
  Estimate e;
  e.value = stats.mean();
  e.std_error = stats.std_error();
  e.n_samples = values.size();
  e.seed = rng.seed();
  e.metric = metric;
  e.shards = shards;
  e.flagged = flagged;
  return e;
}

}  // namespace detail

/// |K L - 1| for one draw, given w = log(K L); w = -inf is the off-support
/// event and contributes exactly 1.
inline double tv_contribution(double log_ratio) {
  if (log_ratio == kNegInf) return 1.0;
  return std::fabs(std::expm1(log_ratio));
}

/// How a Laguerre draw is turned into log(K'_m L'_m(mu)).
enum class RatioRoute {
  kGram,      ///< trace and LDL' log-determinant of A A', O(m)
  kSpectrum,  ///< eigenvalues of A A', O(m^2)
};

/// Per-draw log ratio used by tv_estimate_with: receives the draw's stream.
using LogRatioSampler = std::function<double(RngStream &)>;

inline LogRatioSampler laguerre_log_ratio_sampler(const EnsembleParams &p,
                                                  RatioRoute route = RatioRoute::kGram) {
  const double log_kp = log_km_prime(p);
  return [p, log_kp, route](RngStream &rng) {
    const auto t = gram_tridiagonal(sample_laguerre_bidiagonal(p, rng));
    if (route == RatioRoute::kGram) {
      const auto lp = log_lm_prime_from_gram(p, t);
      return lp.in_support ? log_kp + lp.value : kNegInf;
    }
    const auto mu = laguerre_eigenvalues(t);
    const double lp = log_lm_prime(p, mu);
    return lp == kNegInf ? kNegInf : log_kp + lp;
  };
}

/// Mean of |exp(w) - 1| over draws of `sampler`.
inline Estimate tv_estimate_with(const LogRatioSampler &sampler, std::size_t n_samples,
                                 const RngStream &rng, unsigned shards = 1) {
  detail::require_samples(n_samples, "tv_estimate");
  const auto values = collect_sharded(rng, ShardPlan{n_samples, shards},
                                      [&sampler](RngStream &s) {
                                        return tv_contribution(sampler(s));
                                      });
  return detail::finish(values, rng, Metric::kTv, shards, 0);
}

/// TV distance between L(2a lambda) and L(mu) as E|K'_m L'_m(mu) - 1| under
/// the Laguerre law.
inline Estimate tv_estimate(const EnsembleParams &p, std::size_t n_samples,
                            const RngStream &rng, unsigned shards = 1,
                            RatioRoute route = RatioRoute::kGram) {
  return tv_estimate_with(laguerre_log_ratio_sampler(p, route), n_samples, rng, shards);
}

namespace detail {

struct KlDraw {
  double log_ratio = 0.0;
  bool clamped = false;
};

inline KlDraw kl_draw(const EnsembleParams &p, double log_kp, RngStream &rng,
                      RatioRoute route) {
  const auto t = gram_tridiagonal(sample_jacobi_bidiagonal(p, rng));
  const double two_a = 2.0 * p.a();
  if (route == RatioRoute::kGram) {
    const auto lp = log_lm_prime_from_gram(p, t.scaled(two_a));
    if (lp.in_support) return {log_kp + lp.value, false};
  }
  auto lambda = jacobi_eigenvalues(t);
  bool clamped = false;
  for (double &v : lambda) {
    if (v >= 1.0 - kUnitClamp) {
      v = 1.0 - kUnitClamp;
      clamped = true;
    }
    v *= two_a;
  }
  return {log_kp + log_lm_prime(p, lambda), clamped};
}

}  // namespace detail

/// KL distance E log(K_m L_m(2a lambda)) under the Jacobi law. Draws with an
/// eigenvalue within 1e-15 of 1 are clamped and counted in `flagged`; more
/// than 0.1% of such draws is an error.
inline Estimate kl_estimate(const EnsembleParams &p, std::size_t n_samples,
                            const RngStream &rng, unsigned shards = 1,
                            RatioRoute route = RatioRoute::kGram) {
  detail::require_samples(n_samples, "kl_estimate");
  const double log_kp = log_km_prime(p);
  const auto draws = collect_sharded(rng, ShardPlan{n_samples, shards}, [&](RngStream &s) {
    return detail::kl_draw(p, log_kp, s, route);
  });
  std::vector<double> values;
  values.reserve(draws.size());
  std::size_t clamped = 0;
  for (const auto &d : draws) {
    values.push_back(d.log_ratio);
    clamped += d.clamped ? 1 : 0;
  }
  if (static_cast<double>(clamped) > kMaxClampedFraction * static_cast<double>(n_samples)) {
    throw ConsistencyError("kl_estimate: " + std::to_string(clamped) +
                           " draws had eigenvalues at 1");
  }
  return detail::finish(values, rng, Metric::kKl, shards, clamped);
}

/// Slack of Pinsker's bound tv^2 <= 2 kl, with the estimate noise propagated:
/// returns 2 kl + 4 se - tv^2, which is >= 0 when the pair is consistent.
inline double pinsker_slack(const Estimate &tv, const Estimate &kl) {
  const double se = std::hypot(2.0 * tv.value * tv.std_error, 2.0 * kl.std_error);
  return 2.0 * kl.value + 4.0 * se - tv.value * tv.value;
}

// ---------------------------------------------------------------------------
// Limit laws

/// E|e^xi - 1| for xi ~ N(-s^2/2, s^2), s^2 = beta sigma^2 / 4, by quadrature.
inline double limit_tv_reference(double beta, double sigma) {
  if (!(beta > 0.0) || !(sigma >= 0.0)) {
    throw ParameterError("limit_tv_reference: beta must be positive, sigma nonnegative");
  }
  const double s = std::sqrt(beta * sigma * sigma / 4.0);
  if (s == 0.0) return 0.0;
  // xi = -s^2/2 + s z; the integrand changes sign at z = s/2.
  auto f = [s](double z) { return std::fabs(std::expm1(s * z - 0.5 * s * s)) * normal_pdf(z); };
  const double split = 0.5 * s;
  const double upper = integrate_to_infinity(f, split, 1e-13, 1e-11).value;
  const double lower =
      integrate_to_infinity([&](double z) { return f(2.0 * split - z); }, split, 1e-13, 1e-11)
          .value;
  return upper + lower;
}

/// Closed form 2 (2 Phi(s/2) - 1) of limit_tv_reference.
inline double limit_tv_closed_form(double beta, double sigma) {
  const double s = std::sqrt(beta * sigma * sigma / 4.0);
  return 2.0 * (2.0 * normal_cdf(0.5 * s) - 1.0);
}

// ---------------------------------------------------------------------------
// CLT harness

enum class CltRegime { kA2, kA3 };
enum class CltMode {
  kU,           ///< U_m + u_shift
  kLogLmPrime,  ///< log L'_m(mu) - a1 m + u_shift
};

inline const char *to_string(CltRegime r) { return r == CltRegime::kA2 ? "A2" : "A3"; }
inline const char *to_string(CltMode m) { return m == CltMode::kU ? "u" : "log_lm_prime"; }

/// Finite-size regime proxies.
struct RegimeProxies {
  double sigma = 0.0;  ///< a1 m / a2
  double x = 0.0;      ///< a1 / sqrt(a2)
  double y = 0.0;      ///< m / sqrt(a2)
  double gamma = 0.0;  ///< beta m / (2 a1)
};

inline RegimeProxies regime_proxies(const EnsembleParams &p) {
  const double root = std::sqrt(p.a2());
  return {p.a1() * p.m() / p.a2(), p.a1() / root, p.m() / root,
          p.beta() * p.m() / (2.0 * p.a1())};
}

struct CltReport {
  std::size_t replicates = 0;
  SummaryStats statistic_samples;
  double target_mean = 0.0;
  double target_variance = 0.0;
  KsReport ks;
  CltRegime regime = CltRegime::kA2;
  CltMode mode = CltMode::kU;
  std::uint64_t seed = 0;
  unsigned shards = 1;

  /// z-score of the sample mean against target_mean.
  double mean_z() const { return (statistic_samples.mean() - target_mean) / statistic_samples.std_error(); }
};

namespace detail {

inline void require_replicates(std::size_t n) {
  if (n < kMinCltReplicates) throw ParameterError("CLT harness: replicates must be at least 500");
}

inline CltReport make_clt_report(const std::vector<double> &samples, double mean, double var,
                                 CltRegime regime, CltMode mode, const RngStream &rng,
                                 unsigned shards) {
  if (!(var > 0.0)) throw ParameterError("CLT harness: target variance must be positive");
  CltReport rep;
  rep.replicates = samples.size();
  rep.statistic_samples = accumulate(samples);
  rep.target_mean = mean;
  rep.target_variance = var;
  const double sd = std::sqrt(var);
  rep.ks = ks_test(samples, [mean, sd](double v) { return normal_cdf((v - mean) / sd); });
  rep.regime = regime;
  rep.mode = mode;
  rep.seed = rng.seed();
  rep.shards = shards;
  return rep;
}

}  // namespace detail

/// Draws `replicates` Laguerre spectra and KS-tests the centred statistic
/// against its Gaussian limit: N(0, beta sigma^2 / 4) for U_m, and for
/// log L'_m the mean moves to -beta^2 x y^3 / 12 under A3.
inline CltReport clt_harness(const EnsembleParams &p, CltRegime regime, std::size_t replicates,
                             const RngStream &rng, CltMode mode = CltMode::kU,
                             unsigned shards = 1) {
  detail::require_replicates(replicates);
  const auto px = regime_proxies(p);
  const double shift = u_shift(p);
  const double a2 = p.a2();
  const double r = p.r();
  const auto samples = collect_sharded(rng, ShardPlan{replicates, shards}, [&](RngStream &s) {
    const auto t = gram_tridiagonal(sample_laguerre_bidiagonal(p, s));
    const double two_a1 = 2.0 * p.a1();
    if (mode == CltMode::kU) {
      const auto tr = shifted_traces(t, two_a1);
      return u_statistic_from_sums(p, tr.first, tr.second) + shift;
    }
    const auto det = log_det_unit_shift(t, two_a1, 2.0 * a2);
    if (!det.positive_definite) return kNegInf;
    double half_s1 = 0.0;
    for (double d : t.diag) half_s1 += 0.5 * (d - two_a1);
    return half_s1 + (a2 - r) * det.log_det + shift;
  });
  for (double v : samples) {
    if (!std::isfinite(v)) throw ConsistencyError("CLT harness: draw outside the support");
  }
  const double var = p.beta() * px.sigma * px.sigma / 4.0;
  double mean = 0.0;
  if (mode == CltMode::kLogLmPrime && regime == CltRegime::kA3) {
    mean = -p.beta() * p.beta() * px.x * px.y * px.y * px.y / 12.0;
  }
  return detail::make_clt_report(samples, mean, var, regime, mode, rng, shards);
}

/// Exact mean (a2 - r) 4 a1 m r / (8 a2^2) of the quadratic part of U_m.
inline double quadratic_statistic_mean(const EnsembleParams &p) {
  const double a2 = p.a2();
  const double r = p.r();
  return (a2 - r) * 4.0 * p.a1() * p.m() * r / (8.0 * a2 * a2);
}

/// KS check of ((a2 - r) / 8 a2^2) sum (mu - 2a1)^2, centred by its exact
/// mean, against N(0, (beta sigma^2 + beta^2 x y^3) / 4).
inline CltReport quadratic_clt_check(const EnsembleParams &p, std::size_t replicates,
                                     const RngStream &rng, unsigned shards = 1) {
  detail::require_replicates(replicates);
  const auto px = regime_proxies(p);
  const double a2 = p.a2();
  const double coeff = (a2 - p.r()) / (8.0 * a2 * a2);
  const double centre = quadratic_statistic_mean(p);
  const auto samples = collect_sharded(rng, ShardPlan{replicates, shards}, [&](RngStream &s) {
    const auto t = gram_tridiagonal(sample_laguerre_bidiagonal(p, s));
    return coeff * shifted_traces(t, 2.0 * p.a1()).second - centre;
  });
  const double b = p.beta();
  const double var = (b * px.sigma * px.sigma + b * b * px.x * px.y * px.y * px.y) / 4.0;
  return detail::make_clt_report(samples, 0.0, var, CltRegime::kA3, CltMode::kU, rng, shards);
}

}  // namespace ensdist

#endif  // ENSDIST_DISTANCES_HPP_
