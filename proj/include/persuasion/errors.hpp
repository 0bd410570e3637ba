// Copyright 2026 The Persuasion Toolkit Authors
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

#ifndef PERSUASION_ERRORS_HPP
#define PERSUASION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace persuasion {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bayesian update requested for a signal whose marginal probability is
// (numerically) zero; marks a pruned or unreachable branch.
struct ZeroProbabilitySignal : Error {
  using Error::Error;
};

// An exact enumeration would exceed the configured cap.
struct ExplosionCap : Error {
  using Error::Error;
};

struct SizeCap : Error {
  using Error::Error;
};

// A tree handed to a shape-specific check is not of the expected shape.
struct ShapeMismatch : Error {
  using Error::Error;
};

// Conditional-strategy recovery hit mass where the parent branch has none.
struct DivisionDegeneracy : Error {
  using Error::Error;
};

struct NotIndependent : Error {
  using Error::Error;
};

struct InfeasiblePolicies : Error {
  using Error::Error;
};

struct BadParams : Error {
  using Error::Error;
};

struct InvalidMechanism : Error {
  using Error::Error;
};

}  // namespace persuasion

#endif  // PERSUASION_ERRORS_HPP
