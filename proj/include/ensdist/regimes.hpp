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

#ifndef ENSDIST_REGIMES_HPP_
#define ENSDIST_REGIMES_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ensdist/distances.hpp"
#include "ensdist/ensembles.hpp"
#include "ensdist/errors.hpp"
#include "ensdist/estimate.hpp"
#include "ensdist/numerics/quadrature.hpp"
#include "ensdist/numerics/rng.hpp"
#include "ensdist/numerics/special.hpp"

namespace ensdist {

enum class RegimeKind { kA1, kA2, kA3, kVanishing };

inline const char *to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::kA1: return "A1";
    case RegimeKind::kA2: return "A2";
    case RegimeKind::kA3: return "A3";
    case RegimeKind::kVanishing: return "vanishing";
  }
  return "?";
}

/// A regime together with its defining constants.
struct RegimeSpec {
  RegimeKind kind = RegimeKind::kVanishing;
  double rho = 0.0;    ///< A1: a1 / a2
  double sigma = 0.0;  ///< A2: a1 m / a2
  double x = 0.0;      ///< A3: a1 / sqrt(a2)
  double y = 0.0;      ///< A3: m / sqrt(a2)
  double a1 = 0.0;     ///< vanishing: fixed a1
  int m = 0;           ///< vanishing: fixed m

  static RegimeSpec a1_regime(double rho) { return {RegimeKind::kA1, rho}; }
  static RegimeSpec a2_regime(double sigma) { return {RegimeKind::kA2, 0.0, sigma}; }
  static RegimeSpec a3_regime(double x, double y) {
    return {RegimeKind::kA3, 0.0, 0.0, x, y};
  }
  static RegimeSpec vanishing(double a1, int m) {
    return {RegimeKind::kVanishing, 0.0, 0.0, 0.0, 0.0, a1, m};
  }
};

struct RegimePoint {
  EnsembleParams params;
  double sigma_proxy = 0.0;  ///< a1 m / a2
  double x_proxy = 0.0;      ///< a1 / sqrt(a2)
  double y_proxy = 0.0;      ///< m / sqrt(a2)
  double gamma_proxy = 0.0;  ///< beta m / (2 a1)

  explicit RegimePoint(const EnsembleParams &p) : params(p) {
    const auto px = regime_proxies(p);
    sigma_proxy = px.sigma;
    x_proxy = px.x;
    y_proxy = px.y;
    gamma_proxy = px.gamma;
  }
};

struct RegimeSchedule {
  RegimeSpec spec;
  std::vector<RegimePoint> points;
};

/// Exponent e in a1 = round(a2^e) for A2 schedules.
inline constexpr double kA2Exponent = 0.55;
/// Allowed relative deviation of a point's proxy from the regime constant.
inline constexpr double kProxyTolerance = 0.05;

namespace detail {

[[noreturn]] inline void schedule_error(std::size_t index, double a2, const std::string &why) {
  std::ostringstream os;
  os.precision(12);
  os << "schedule point " << index << " (a2=" << a2 << "): " << why;
  throw ParameterError(os.str());
}

inline void check_proxy(std::size_t index, double a2, const char *name, double got,
                        double want) {
  if (std::fabs(got - want) > kProxyTolerance * std::fabs(want)) {
    std::ostringstream os;
    os.precision(6);
    os << name << " proxy " << got << " is not within 5% of " << want;
    schedule_error(index, a2, os.str());
  }
}

}  // namespace detail

/// Geometric a2 grid of `steps` points over [low, high], each turned into a
/// parameter point of the requested regime and validated.
inline RegimeSchedule make_schedule(const RegimeSpec &spec, double beta, int steps, double low,
                                    double high) {
  if (steps < 3) throw ParameterError("schedule needs at least 3 steps");
  if (!(low > 1e3)) throw ParameterError("schedule a2 range must start above 1e3");
  if (!(high > low) || !std::isfinite(high)) {
    throw ParameterError("schedule a2 range must be increasing and finite");
  }
  RegimeSchedule out;
  out.spec = spec;
  const double l0 = std::log10(low);
  const double l1 = std::log10(high);
  for (int k = 0; k < steps; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k);
    const double a2 = k == steps - 1 ? high : std::pow(10.0, l0 + (l1 - l0) * k / (steps - 1));
    double a1 = 0.0;
    int m = 0;
    switch (spec.kind) {
      case RegimeKind::kA1:
        if (!(spec.rho > 0.0 && spec.rho < 1.0)) detail::schedule_error(idx, a2, "rho must lie in (0, 1)");
        m = 1;
        a1 = std::round(spec.rho * a2);
        break;
      case RegimeKind::kA2:
        if (!(spec.sigma > 0.0)) detail::schedule_error(idx, a2, "sigma must be positive");
        a1 = std::round(std::pow(a2, kA2Exponent));
        m = static_cast<int>(std::lround(spec.sigma * a2 / a1));
        break;
      case RegimeKind::kA3:
        if (!(spec.x > 0.0 && spec.y > 0.0)) detail::schedule_error(idx, a2, "x and y must be positive");
        a1 = std::round(spec.x * std::sqrt(a2));
        m = static_cast<int>(std::lround(spec.y * std::sqrt(a2)));
        if (!(2.0 * a1 > beta * (m - 1))) {
          detail::schedule_error(idx, a2, "A3 requires 2 a1 > beta (m - 1), i.e. beta y <= 2 x");
        }
        break;
      case RegimeKind::kVanishing:
        a1 = spec.a1;
        m = spec.m;
        break;
    }
    if (m < 1) detail::schedule_error(idx, a2, "m rounds to zero");
    std::optional<EnsembleParams> params;
    try {
      params.emplace(beta, m, a1, a2);
    } catch (const ParameterError &e) {
      detail::schedule_error(idx, a2, e.what());
    }
    RegimePoint point(*params);
    switch (spec.kind) {
      case RegimeKind::kA1:
        detail::check_proxy(idx, a2, "a1/a2", a1 / a2, spec.rho);
        break;
      case RegimeKind::kA2:
        detail::check_proxy(idx, a2, "sigma", point.sigma_proxy, spec.sigma);
        break;
      case RegimeKind::kA3:
        detail::check_proxy(idx, a2, "x", point.x_proxy, spec.x);
        detail::check_proxy(idx, a2, "y", point.y_proxy, spec.y);
        break;
      case RegimeKind::kVanishing:
        break;
    }
    if (!out.points.empty() && !(a2 > out.points.back().params.a2())) {
      detail::schedule_error(idx, a2, "a2 must increase along the schedule");
    }
    out.points.push_back(point);
  }
  return out;
}

enum class ScanMetric { kTv, kKl, kClt };

inline const char *to_string(ScanMetric m) {
  switch (m) {
    case ScanMetric::kTv: return "tv";
    case ScanMetric::kKl: return "kl";
    case ScanMetric::kClt: return "clt";
  }
  return "?";
}

struct ScanEntry {
  RegimePoint point;
  std::optional<Estimate> estimate;
  std::optional<CltReport> clt;
  bool failed = false;
  std::string error;
};

/// Estimates `metric` at every schedule point. Point i uses rng.substream(i);
/// a point whose estimator throws is flagged and the scan continues.
inline std::vector<ScanEntry> scan(const RegimeSchedule &schedule, ScanMetric metric,
                                   std::size_t n_samples, const RngStream &rng,
                                   unsigned shards = 1) {
  std::vector<ScanEntry> out;
  out.reserve(schedule.points.size());
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    ScanEntry entry{schedule.points[i], std::nullopt, std::nullopt, false, {}};
    const RngStream stream = rng.substream(i);
    const auto &p = entry.point.params;
    try {
      switch (metric) {
        case ScanMetric::kTv: entry.estimate = tv_estimate(p, n_samples, stream, shards); break;
        case ScanMetric::kKl: entry.estimate = kl_estimate(p, n_samples, stream, shards); break;
        case ScanMetric::kClt: {
          CltRegime regime;
          if (schedule.spec.kind == RegimeKind::kA2) {
            regime = CltRegime::kA2;
          } else if (schedule.spec.kind == RegimeKind::kA3) {
            regime = CltRegime::kA3;
          } else {
            throw ParameterError("CLT scans need an A2 or A3 schedule");
          }
          entry.clt = clt_harness(p, regime, n_samples, stream, CltMode::kU, shards);
          break;
        }
      }
    } catch (const std::exception &e) {
      entry.failed = true;
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

/// E|sqrt(1 + sigma) exp(-sigma Z^2 / 2) - 1| for Z ~ N(0, 1), the limiting
/// TV distance in the m = 1 regime with a1 / a2 -> sigma.
inline double a1_limit_tv_reference(double sigma) {
  if (!(sigma >= 0.0 && sigma < 1.0)) {
    throw ParameterError("a1_limit_tv_reference: sigma must lie in (0, 1)");
  }
  if (sigma == 0.0) return 0.0;
  const double c = std::sqrt(1.0 + sigma);
  auto f = [c, sigma](double z) {
    return std::fabs(c * std::exp(-0.5 * sigma * z * z) - 1.0) * normal_pdf(z);
  };
  const double root = std::sqrt(std::log1p(sigma) / sigma);
  const double inner = integrate(f, 0.0, root, 1e-14, 1e-12).value;
  const double outer = integrate_to_infinity(f, root, 1e-14, 1e-12).value;
  return 2.0 * (inner + outer);
}

}  // namespace ensdist

#endif  // ENSDIST_REGIMES_HPP_
