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

#ifndef ENSDIST_MOMENTS_HPP_
#define ENSDIST_MOMENTS_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ensdist/ensembles.hpp"
#include "ensdist/errors.hpp"
#include "ensdist/estimate.hpp"
#include "ensdist/numerics/rng.hpp"
#include "ensdist/numerics/sharding.hpp"
#include "ensdist/numerics/stats.hpp"

namespace ensdist {

enum class ChiMoment {
  kRaw,             ///< E X^k
  kCentral2,        ///< E (X - n)^2
  kCentral3,        ///< E (X - n)^3
  kCentral4,        ///< E (X - n)^4
  kVarSquare,       ///< Var(X^2)
  kVarCentralSquare ///< Var((X - n)^2)
};

/// Closed-form moments of X ~ chi2(n).
inline double chi_moment(double dof, ChiMoment which, int k = 1) {
  if (!(dof > 0.0)) throw DomainError("chi_moment: dof must be positive");
  const double n = dof;
  switch (which) {
    case ChiMoment::kRaw: {
      if (k < 1) throw ParameterError("chi_moment: raw order must be >= 1");
      double acc = 1.0;
      for (int l = 0; l < k; ++l) acc *= n + 2.0 * l;
      return acc;
    }
    case ChiMoment::kCentral2: return 2.0 * n;
    case ChiMoment::kCentral3: return 8.0 * n;
    case ChiMoment::kCentral4: return 12.0 * n * (n + 4.0);
    case ChiMoment::kVarSquare: return 8.0 * n * (n + 2.0) * (n + 3.0);
    case ChiMoment::kVarCentralSquare: return 8.0 * n * (n + 6.0);
  }
  throw ParameterError("chi_moment: unknown selector");
}

/// Leading-order terms of E sum lambda^k, k = 1, 2, 3, for a1 m = o(a2).
struct JacobiMomentEstimates {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

inline JacobiMomentEstimates jacobi_moment_estimates(const EnsembleParams &p) {
  const double m = p.m();
  const double a1 = p.a1();
  const double a = p.a();
  const double eta = p.eta();
  JacobiMomentEstimates out;
  out.s1 = a1 * m / a;
  out.s2 = (a1 * a1 * m + eta * a1 * m * m) / (a * a);
  out.s3 = (a1 * a1 * a1 * m + 3.0 * eta * a1 * a1 * m * m + eta * eta * a1 * m * m * m) /
           (a * a * a);
  return out;
}

/// Exact Laguerre spectral statistics; every shifted sum is about 2 a1.
struct LaguerreStats {
  double var_sum = 0.0;     ///< Var sum mu
  double e_sq = 0.0;        ///< E sum (mu - 2a1)^2
  double var_sq = 0.0;      ///< Var sum (mu - 2a1)^2
  double cov_lin_sq = 0.0;  ///< Cov(sum mu, sum (mu - 2a1)^2)
  double e_cube = 0.0;      ///< E sum (mu - 2a1)^3
};

inline LaguerreStats laguerre_exact_stats(const EnsembleParams &p) {
  const double b = p.beta();
  const double m = p.m();
  const double a1 = p.a1();
  const double r = p.r();
  LaguerreStats s;
  s.var_sum = 4.0 * a1 * m;
  s.e_sq = 4.0 * a1 * m * r;
  s.var_sq = 16.0 * b * a1 * m * (m - 1.0) * (a1 + 5.0) +
             8.0 * b * b * a1 * m * (m - 1.0) * (2.0 * m - 3.0) + 32.0 * a1 * m * (a1 + 3.0);
  s.cov_lin_sq = 16.0 * a1 * m * r;
  s.e_cube = 2.0 * b * b * a1 * m * (m - 1.0) * (m - 2.0) + 12.0 * b * a1 * m * (m - 1.0) +
             16.0 * a1 * m;
  return s;
}

/// b_1 = 0, b_i = beta m - 2 beta (i - 1); z_dof_i = 2 a1 + b_i.
struct AuxSequences {
  std::vector<double> b;
  std::vector<double> z_dof;
};

inline AuxSequences aux_sequences(const EnsembleParams &p) {
  AuxSequences out;
  out.b.resize(p.size());
  out.z_dof.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double i = static_cast<double>(k + 1);
    out.b[k] = k == 0 ? 0.0 : p.beta() * p.m() - 2.0 * p.beta() * (i - 1.0);
    out.z_dof[k] = 2.0 * p.a1() + out.b[k];
  }
  return out;
}

/// tr((AA' - shift I)^k) from the bidiagonal entries alone, with
/// z_i = x_i^2 + y_i^2 and cross terms w_i = x_i^2 y_{i+1}^2.
inline double trace_power_from_entries(const LaguerreBidiagonal &a, int k, double shift) {
  const std::size_t m = a.x.size();
  std::vector<double> z(m);
  for (std::size_t i = 0; i < m; ++i) {
    z[i] = a.x[i] * a.x[i] + (i > 0 ? a.y[i - 1] * a.y[i - 1] : 0.0);
  }
  double acc = 0.0;
  for (double zi : z) acc += std::pow(zi - shift, k);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double w = a.x[i] * a.x[i] * a.y[i] * a.y[i];
    if (k == 2) acc += 2.0 * w;
    if (k == 3) acc += 3.0 * w * (z[i] + z[i + 1] - 2.0 * shift);
  }
  return acc;
}

inline constexpr double kTraceOracleTolerance = 1e-9;

/// tr((AA' - shift I)^k), k in {1, 2, 3}, from the eigenvalues, after
/// checking it against the entry formula. Throws ConsistencyError when the two
/// disagree by more than 1e-9 max(1, |value|).
inline double trace_power_oracle(const LaguerreBidiagonal &a, int k, double shift) {
  if (k < 1 || k > 3) throw ParameterError("trace_power_oracle: k must be 1, 2 or 3");
  const auto mu = eigenvalues(gram_tridiagonal(a));
  double from_eigs = 0.0;
  for (double v : mu) from_eigs += std::pow(v - shift, k);
  const double from_entries = trace_power_from_entries(a, k, shift);
  if (!(std::fabs(from_eigs - from_entries) <=
        kTraceOracleTolerance * std::fmax(1.0, std::fabs(from_eigs)))) {
    throw ConsistencyError("trace identity k=" + std::to_string(k) + " mismatch: eigenvalues " +
                           std::to_string(from_eigs) + " vs entries " +
                           std::to_string(from_entries));
  }
  return from_eigs;
}

/// Per-draw shifted power sums S_k = sum (mu_i - 2 a1)^k of a Laguerre draw,
/// taken from the Gram matrix traces.
struct ShiftedSums {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

inline ShiftedSums laguerre_shifted_sums(const EnsembleParams &p, RngStream &rng) {
  const auto t = gram_tridiagonal(sample_laguerre_bidiagonal(p, rng));
  const auto tr = shifted_traces(t, 2.0 * p.a1());
  return {tr.first, tr.second, tr.third};
}

inline std::vector<ShiftedSums> sample_shifted_sums(const EnsembleParams &p, std::size_t n,
                                                    const RngStream &rng, unsigned shards = 1) {
  return collect_sharded(rng, ShardPlan{n, shards},
                         [&p](RngStream &s) { return laguerre_shifted_sums(p, s); });
}

inline constexpr std::size_t kMinProbeSamples = 100;

/// Monte Carlo Var(sum (mu_i - 2 a1)^3) with its fourth-moment standard error.
inline Estimate cubic_variance_probe(const EnsembleParams &p, std::size_t n_samples,
                                     const RngStream &rng, unsigned shards = 1) {
  if (n_samples < kMinProbeSamples) {
    throw ParameterError("cubic_variance_probe: n_samples must be at least 100");
  }
  const auto sums = sample_shifted_sums(p, n_samples, rng, shards);
  std::vector<double> cubes;
  cubes.reserve(sums.size());
  for (const auto &s : sums) cubes.push_back(s.s3);
  const auto v = variance_with_error(cubes);
  return {v.value, v.std_error, n_samples, rng.seed(), Metric::kStatistic, shards, 0};
}

/// Monte Carlo counterparts of every LaguerreStats field.
struct LaguerreStatsProbe {
  ValueWithError var_sum;
  ValueWithError e_sq;
  ValueWithError var_sq;
  ValueWithError cov_lin_sq;
  ValueWithError e_cube;
};

inline LaguerreStatsProbe laguerre_stats_probe(const EnsembleParams &p, std::size_t n_samples,
                                               const RngStream &rng, unsigned shards = 1) {
  if (n_samples < kMinProbeSamples) {
    throw ParameterError("laguerre_stats_probe: n_samples must be at least 100");
  }
  const auto sums = sample_shifted_sums(p, n_samples, rng, shards);
  std::vector<double> s1, s2, s3;
  s1.reserve(sums.size());
  s2.reserve(sums.size());
  s3.reserve(sums.size());
  for (const auto &s : sums) {
    s1.push_back(s.s1);
    s2.push_back(s.s2);
    s3.push_back(s.s3);
  }
  return {variance_with_error(s1), mean_with_error(s2), variance_with_error(s2),
          covariance_with_error(s1, s2), mean_with_error(s3)};
}

/// Monte Carlo means of sum lambda^k, k = 1, 2, 3, over Jacobi draws.
struct JacobiMomentProbe {
  ValueWithError s1;
  ValueWithError s2;
  ValueWithError s3;
};

inline JacobiMomentProbe jacobi_moment_probe(const EnsembleParams &p, std::size_t n_samples,
                                             const RngStream &rng, unsigned shards = 1) {
  if (n_samples < kMinProbeSamples) {
    throw ParameterError("jacobi_moment_probe: n_samples must be at least 100");
  }
  const auto traces = collect_sharded(rng, ShardPlan{n_samples, shards}, [&p](RngStream &s) {
    return shifted_traces(gram_tridiagonal(sample_jacobi_bidiagonal(p, s)), 0.0);
  });
  std::vector<double> t1, t2, t3;
  for (const auto &t : traces) {
    t1.push_back(t.first);
    t2.push_back(t.second);
    t3.push_back(t.third);
  }
  return {mean_with_error(t1), mean_with_error(t2), mean_with_error(t3)};
}

/// Almost-sure limits m beta (1 -/+ gamma^{-1/2})^2 of the extreme Laguerre
/// eigenvalues, gamma = beta m / (2 a1) taken at finite size.
inline std::pair<double, double> spectral_edge_prediction(const EnsembleParams &p) {
  const double gamma = p.beta() * p.m() / (2.0 * p.a1());
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw ParameterError("spectral_edge_prediction: gamma = beta m / (2 a1) must lie in (0, 1]");
  }
  const double root = std::sqrt(1.0 / gamma);
  const double scale = p.m() * p.beta();
  return {scale * (1.0 - root) * (1.0 - root), scale * (1.0 + root) * (1.0 + root)};
}

}  // namespace ensdist

#endif  // ENSDIST_MOMENTS_HPP_
