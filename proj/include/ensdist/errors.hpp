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

#ifndef ENSDIST_ERRORS_HPP_
#define ENSDIST_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ensdist {

/// Argument outside the mathematical domain of a function (x <= 0 for log
/// gamma, empty sample for a KS test, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

/// Ensemble or schedule parameters that violate a model constraint.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string &what)
      : std::invalid_argument(what) {}
};

/// Two routes to the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string &what)
      : std::runtime_error(what) {}
};

}  // namespace ensdist

#endif  // ENSDIST_ERRORS_HPP_
