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

#ifndef ENSDIST_NUMERICS_VARIATES_HPP_
#define ENSDIST_NUMERICS_VARIATES_HPP_

#include <cmath>
#include <string>

#include "ensdist/errors.hpp"
#include "ensdist/numerics/rng.hpp"

namespace ensdist {

/// Gamma(shape, 1) variate by Marsaglia and Tsang's squeeze/rejection method.
/// Shapes below one use the boost Gamma(shape) = Gamma(shape + 1) U^(1/shape),
/// evaluated in log space so tiny shapes do not lose the factor to underflow
/// before the final exponential.
inline double sample_gamma(double shape, RngStream &rng) {
  if (!(shape > 0.0) || std::isinf(shape)) {
    throw DomainError("sample_gamma: shape must be positive, got " +
                      std::to_string(shape));
  }
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return std::exp(std::log(g) + std::log(rng.uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Chi-square variate with real degrees of freedom, 2 Gamma(dof / 2).
inline double sample_chi_square(double dof, RngStream &rng) {
  if (!(dof > 0.0) || std::isinf(dof)) {
    throw DomainError("sample_chi_square: dof must be positive, got " +
                      std::to_string(dof));
  }
  return 2.0 * sample_gamma(0.5 * dof, rng);
}

/// Beta(alpha, beta_param) variate as G1 / (G1 + G2). The result is strictly
/// inside (0, 1); a pair that rounds to an endpoint is redrawn.
inline double sample_beta(double alpha, double beta_param, RngStream &rng) {
  if (!(alpha > 0.0) || !(beta_param > 0.0) || std::isinf(alpha) ||
      std::isinf(beta_param)) {
    throw DomainError("sample_beta: parameters must be positive, got (" +
                      std::to_string(alpha) + ", " + std::to_string(beta_param) +
                      ")");
  }
  for (;;) {
    const double g1 = sample_gamma(alpha, rng);
    const double g2 = sample_gamma(beta_param, rng);
    const double x = g1 / (g1 + g2);
    if (x > 0.0 && x < 1.0) return x;
  }
}

}  // namespace ensdist

#endif  // ENSDIST_NUMERICS_VARIATES_HPP_
