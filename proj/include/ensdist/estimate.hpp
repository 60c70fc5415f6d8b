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

#ifndef ENSDIST_ESTIMATE_HPP_
#define ENSDIST_ESTIMATE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace ensdist {

enum class Metric { kTv, kKl, kStatistic };

inline const char *to_string(Metric metric) {
  switch (metric) {
    case Metric::kTv: return "tv";
    case Metric::kKl: return "kl";
    case Metric::kStatistic: return "statistic";
  }
  return "?";
}

/// A Monte Carlo scalar with its provenance.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  Metric metric = Metric::kStatistic;
  unsigned shards = 1;
  /// Draws that needed special handling (clamped eigenvalues for KL).
  std::size_t flagged = 0;

  double z_score(double target) const {
    if (std_error == 0.0) return value == target ? 0.0 : INFINITY;
    return (value - target) / std_error;
  }
};

}  // namespace ensdist

#endif  // ENSDIST_ESTIMATE_HPP_
