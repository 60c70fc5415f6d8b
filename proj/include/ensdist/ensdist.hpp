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

#ifndef ENSDIST_ENSDIST_HPP_
#define ENSDIST_ENSDIST_HPP_

#include "ensdist/densities.hpp"
#include "ensdist/distances.hpp"
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
#include "ensdist/numerics/variates.hpp"
#include "ensdist/regimes.hpp"

#endif  // ENSDIST_ENSDIST_HPP_
