// Copyright 2026 The loopgbs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace gbs {

// Precondition violations (bad shapes, out-of-range parameters) throw
// std::invalid_argument. The two types below cover the remaining failure
// classes that callers need to tell apart, e.g. for CLI exit codes.

// A numerical guard tripped: unphysical intermediate, enumeration too large,
// zero normalisation, missing crossing.
/// Numerical breakdown: non-physical intermediate, failed factorisation,
/// imaginary probability residue, zero-mass distribution.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
/// Size guard exceeded (hafnian dimension, enumeration count, brute force).
/// A precondition failure, so it derives from std::invalid_argument.
class GuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbs
