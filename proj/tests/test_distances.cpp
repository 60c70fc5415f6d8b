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

#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "ensdist/distances.hpp"
#include "ensdist/numerics/stats.hpp"

namespace ensdist {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

// Densities of theta = 2a lambda (lambda ~ Beta(a1, a2)) and of chi2(2 a1),
// the m = 1 pair.
struct SingleEigenvaluePair {
  double a1, a2;
  double two_a() const { return 2.0 * (a1 + a2); }
  double jacobi(double th) const {
    return pdf(boost::math::beta_distribution<>(a1, a2), th / two_a()) / two_a();
  }
  double laguerre(double th) const { return pdf(boost::math::chi_squared(2.0 * a1), th); }
};

template <class F>
double integrate_pieces(F f, std::initializer_list<double> cuts) {
  double acc = 0.0;
  const double *c = cuts.begin();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += GK::integrate(f, c[i], c[i + 1], 12, 1e-12);
  return acc;
}

TEST(UStatistic, Examples) {
  const auto p = EnsembleParams::jacobi(1, 1, 3, 100);
  EXPECT_EQ(u_statistic(p, Spectrum{{6.0}, SpectrumKind::kLaguerre}), 0.0);
  EXPECT_NEAR(u_statistic(p, Spectrum{{8.0}, SpectrumKind::kLaguerre}), 0.00505, 1e-15);
  const auto q = EnsembleParams::jacobi(2, 4, 7, 1e3);
  EXPECT_EQ(u_statistic(q, Spectrum{std::vector<double>(4, 14.0), SpectrumKind::kLaguerre}), 0.0);
}

TEST(UStatistic, Errors) {
  const auto p = EnsembleParams::jacobi(1, 2, 3, 100);
  EXPECT_THROW(u_statistic(p, Spectrum{{1.0, 2.0}, SpectrumKind::kJacobiUnit}), ParameterError);
  EXPECT_THROW(u_statistic(p, Spectrum{{1.0}, SpectrumKind::kLaguerre}), ParameterError);
  EXPECT_THROW(u_statistic(EnsembleParams::laguerre(1, 1, 3), Spectrum{{1.0}}), ParameterError);
}

TEST(UShift, Examples) {
  EXPECT_DOUBLE_EQ(u_shift(EnsembleParams::jacobi(1, 1, 7, 50)), 49.0 * 7 / (2 * 2500.0));
  const double r = 500.5;
  const double want = (1e6 - r) * 1e6 * r / 2e12;
  EXPECT_DOUBLE_EQ(u_shift(EnsembleParams::jacobi(1, 1000, 1000, 1e6)), want);
  EXPECT_NEAR(want, 250.12, 0.01);
  for (double a2 : {20.0, 1e3, 1e8}) EXPECT_GT(u_shift(EnsembleParams::jacobi(2, 5, 9, a2)), 0.0);
}

TEST(UStatistic, MeanIsMinusShift) {
  for (const auto &p : {EnsembleParams::jacobi(1, 3, 5, 100), EnsembleParams::jacobi(2, 6, 20, 400)}) {
    RngStream rng(606, p.size());
    std::vector<double> u(100000);
    for (auto &v : u) v = u_statistic(p, sample_spectrum(SpectrumKind::kLaguerre, p, rng));
    EXPECT_LT(std::fabs(mean_with_error(u).z_score(-u_shift(p))), 4.0) << p.describe();
  }
}

TEST(TvEstimate, IdentityHookGivesZero) {
  const auto e = tv_estimate_with([](RngStream &) { return 0.0; }, 500, RngStream(1, 0));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.metric, Metric::kTv);
  const auto off = tv_estimate_with([](RngStream &) { return kNegInf; }, 500, RngStream(1, 0));
  EXPECT_EQ(off.value, 1.0);
  EXPECT_EQ(off.std_error, 0.0);
}

TEST(TvEstimate, Contribution) {
  EXPECT_EQ(tv_contribution(kNegInf), 1.0);
  EXPECT_EQ(tv_contribution(0.0), 0.0);
  EXPECT_NEAR(tv_contribution(std::log(3.0)), 2.0, 1e-15);
  EXPECT_NEAR(tv_contribution(-1e-12), 1e-12, 1e-24);
}

TEST(TvEstimate, SingleEigenvalueQuadrature) {
  const SingleEigenvaluePair pr{20, 2000};
  const double tv = integrate_pieces(
      [&](double th) { return std::fabs(pr.jacobi(th) - pr.laguerre(th)); },
      {0.0, 20.0, 40.0, 80.0, 200.0, pr.two_a()});
  const auto p = EnsembleParams::jacobi(1, 1, 20, 2000);
  for (auto route : {RatioRoute::kGram, RatioRoute::kSpectrum}) {
    const auto e = tv_estimate(p, 100000, RngStream(41, 0), 2, route);
    EXPECT_LT(std::fabs(e.z_score(tv)), 3.0) << e.value << " vs " << tv;
    EXPECT_EQ(e.n_samples, 100000u);
    EXPECT_EQ(e.shards, 2u);
    EXPECT_EQ(e.seed, 41u);
  }
}

TEST(TvEstimate, RoutesAgreeDrawByDraw) {
  const auto p = EnsembleParams::jacobi(2, 40, 300, 1e5);
  const auto g = tv_estimate(p, 200, RngStream(8, 1), 1, RatioRoute::kGram);
  const auto s = tv_estimate(p, 200, RngStream(8, 1), 1, RatioRoute::kSpectrum);
  EXPECT_NEAR(g.value, s.value, 1e-8);
}

TEST(TvEstimate, A2PointNearLimit) {
  const auto p = EnsembleParams::jacobi(2, 200, 2e4, 4e6);
  const auto e = tv_estimate(p, 10000, RngStream(2718, 0), 4);
  EXPECT_NEAR(e.value, limit_tv_reference(2, 1), 0.05);
  EXPECT_GT(e.value, 0.2);
  EXPECT_LE(e.value, 2.0);
}

TEST(TvEstimate, ShardedRunsAreReproducible) {
  const auto p = EnsembleParams::jacobi(1, 10, 30, 1e4);
  const auto a = tv_estimate(p, 1000, RngStream(5, 0), 3);
  const auto b = tv_estimate(p, 1000, RngStream(5, 0), 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_THROW(tv_estimate(p, 99, RngStream(5, 0)), ParameterError);
}

TEST(KlEstimate, SingleEigenvalueQuadrature) {
  const SingleEigenvaluePair pr{20, 2000};
  const double kl = integrate_pieces(
      [&](double th) {
        const double fj = pr.jacobi(th);
        return fj > 0.0 ? fj * std::log(fj / pr.laguerre(th)) : 0.0;
      },
      {0.0, 20.0, 40.0, 80.0, 200.0, 1000.0});
  const auto p = EnsembleParams::jacobi(1, 1, 20, 2000);
  for (auto route : {RatioRoute::kGram, RatioRoute::kSpectrum}) {
    const auto e = kl_estimate(p, 100000, RngStream(43, 0), 1, route);
    EXPECT_LT(std::fabs(e.z_score(kl)), 3.0) << e.value << " vs " << kl;
    EXPECT_EQ(e.flagged, 0u);
    EXPECT_EQ(e.metric, Metric::kKl);
  }
}

TEST(KlEstimate, VanishingScheduleDecreases) {
  std::vector<Estimate> kl;
  for (double a2 : {1e4, 1e5, 1e6}) {
    kl.push_back(kl_estimate(EnsembleParams::jacobi(1, 10, 10, a2), 10000, RngStream(99, 0)));
  }
  for (const auto &e : kl) EXPECT_GE(e.value, -3.0 * e.std_error);
  for (std::size_t i = 1; i < kl.size(); ++i) {
    const double se = std::hypot(kl[i].std_error, kl[i - 1].std_error);
    EXPECT_LT(kl[i].value, kl[i - 1].value + 2.0 * se);
  }
  EXPECT_LE(kl.back().value, 0.02);
  EXPECT_THROW(kl_estimate(EnsembleParams::jacobi(1, 10, 10, 1e4), 10, RngStream(1, 0)),
               ParameterError);
}

TEST(Pinsker, HoldsOnEstimatedPairs) {
  for (const auto &p : {EnsembleParams::jacobi(1, 1, 20, 2000), EnsembleParams::jacobi(1, 10, 10, 1e4),
                        EnsembleParams::jacobi(2, 20, 200, 2e4)}) {
    const auto tv = tv_estimate(p, 20000, RngStream(12, 0));
    const auto kl = kl_estimate(p, 20000, RngStream(12, 0));
    EXPECT_GE(pinsker_slack(tv, kl), 0.0) << p.describe();
  }
  Estimate tv, kl;
  tv.value = 1.0;
  kl.value = 0.1;
  EXPECT_LT(pinsker_slack(tv, kl), 0.0);
}

TEST(LimitTv, Reference) {
  EXPECT_EQ(limit_tv_reference(2, 0), 0.0);
  EXPECT_LT(limit_tv_reference(2, 1e-6), 1e-6);
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    for (double sigma : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      EXPECT_NEAR(limit_tv_reference(beta, sigma), limit_tv_closed_form(beta, sigma), 1e-8);
    }
  }
  double prev = 0.0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double v = limit_tv_reference(2, sigma);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(limit_tv_reference(0, 1), ParameterError);
  EXPECT_THROW(limit_tv_reference(1, -1), ParameterError);
}

TEST(LimitTv, MatchesSimulatedLognormal) {
  RngStream rng(3, 3);
  const double s = std::sqrt(2.0 / 4.0);
  std::vector<double> v(200000);
  for (auto &x : v) x = std::fabs(std::expm1(-0.5 * s * s + s * rng.normal()));
  EXPECT_LT(std::fabs(mean_with_error(v).z_score(limit_tv_reference(2, 1))), 4.0);
}

TEST(Clt, A2UStatistic) {
  const auto p = EnsembleParams::jacobi(1, 100, 1e4, 1e6);
  const auto rep = clt_harness(p, CltRegime::kA2, 2000, RngStream(1001, 0));
  EXPECT_GT(rep.ks.p_value, 0.01);
  EXPECT_DOUBLE_EQ(rep.target_variance, 0.25);
  EXPECT_EQ(rep.target_mean, 0.0);
  EXPECT_EQ(rep.replicates, 2000u);
}

TEST(Clt, A3UStatisticAndLogLmPrime) {
  const auto p = EnsembleParams::jacobi(1, 1000, 1000, 1e6);
  const auto u = clt_harness(p, CltRegime::kA3, 2000, RngStream(1002, 0));
  EXPECT_GT(u.ks.p_value, 0.01);
  const auto l = clt_harness(p, CltRegime::kA3, 2000, RngStream(1003, 0), CltMode::kLogLmPrime);
  EXPECT_NEAR(l.target_mean, -1.0 / 12.0, 1e-12);
  EXPECT_LT(std::fabs(l.mean_z()), 4.0);
}

TEST(Clt, QuadraticStatistic) {
  const auto p = EnsembleParams::jacobi(1, 1000, 1000, 1e6);
  const auto rep = quadratic_clt_check(p, 2000, RngStream(1004, 0));
  EXPECT_GT(rep.ks.p_value, 0.01);
  EXPECT_DOUBLE_EQ(rep.target_variance, 0.5);
  EXPECT_NEAR(rep.statistic_samples.variance(), 0.5, 0.05);
  EXPECT_LT(std::fabs(rep.mean_z()), 4.0);
}

TEST(Clt, Errors) {
  const auto p = EnsembleParams::jacobi(1, 100, 1e4, 1e6);
  EXPECT_THROW(clt_harness(p, CltRegime::kA2, 499, RngStream(1, 0)), ParameterError);
  EXPECT_THROW(quadratic_clt_check(p, 10, RngStream(1, 0)), ParameterError);
}

TEST(RegimeProxies, Values) {
  const auto px = regime_proxies(EnsembleParams::jacobi(1, 1000, 2000, 1e6));
  EXPECT_DOUBLE_EQ(px.sigma, 2.0);
  EXPECT_DOUBLE_EQ(px.x, 2.0);
  EXPECT_DOUBLE_EQ(px.y, 1.0);
  EXPECT_DOUBLE_EQ(px.gamma, 0.25);
}

}  // namespace
}  // namespace ensdist
