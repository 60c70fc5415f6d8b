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

#ifndef ENSDIST_NUMERICS_QUADRATURE_HPP_
#define ENSDIST_NUMERICS_QUADRATURE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ensdist/errors.hpp"

namespace ensdist {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

struct GkSegment {
  double a, b, value, error;
  bool operator<(const GkSegment &o) const { return error < o.error; }
};

template <class F>
GkSegment gauss_kronrod_15(F &f, double a, double b) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += wgk[j] * pair;
    if (j % 2 == 1) gauss += wg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]. The segment
/// with the largest error estimate is bisected until the total error is
/// below max(abs_tol, rel_tol |I|).
template <class F>
QuadratureResult integrate(F &&f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-10, int max_intervals = 4000) {
  if (!(a <= b)) throw DomainError("integrate: require a <= b");
  if (a == b) return {};
  std::priority_queue<detail::GkSegment> heap;
  auto first = detail::gauss_kronrod_15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * std::fabs(total)) &&
         intervals < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error, intervals};
}

/// Integral of f over [a, +inf) through the map x = a + t / (1 - t).
template <class F>
QuadratureResult integrate_to_infinity(F &&f, double a, double abs_tol = 1e-12,
                                       double rel_tol = 1e-10) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double v = f(x) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol);
}

/// Integral of f over the real line, split at `centre`.
template <class F>
QuadratureResult integrate_real_line(F &&f, double centre = 0.0,
                                     double abs_tol = 1e-12,
                                     double rel_tol = 1e-10) {
  auto right = integrate_to_infinity(f, centre, abs_tol, rel_tol);
  auto left = integrate_to_infinity([&](double x) { return f(2.0 * centre - x); },
                                    centre, abs_tol, rel_tol);
  return {left.value + right.value, left.abs_error + right.abs_error,
          left.intervals + right.intervals};
}

}  // namespace ensdist

#endif  // ENSDIST_NUMERICS_QUADRATURE_HPP_
