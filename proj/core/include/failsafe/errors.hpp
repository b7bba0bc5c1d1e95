// Copyright 2026 The failsafe-nmpc Authors
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

#ifndef FAILSAFE__ERRORS_HPP_
#define FAILSAFE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace failsafe
{

/// The single-track model divides by v_x; evaluating it below the floor is refused.
class SingularVelocityError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// A precondition on an argument (ordering, positivity, dimension) was violated.
class InvalidArgumentError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Simulation produced a non-finite state and was aborted.
class SimulationAbort : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace failsafe

#endif  // FAILSAFE__ERRORS_HPP_
