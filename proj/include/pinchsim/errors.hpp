// SPDX-License-Identifier: Apache-2.0
//
// pinchsim - multi-waveguide pinching-antenna simulator with LoS blockages
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace pinchsim
{

// Invalid user-supplied configuration (unknown key, out-of-range value, N != K).
struct ConfigError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Degenerate geometry: zero-length segments, coincident points, non-finite coordinates.
struct GeometryError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// A matching violates the one-to-one / one-antenna-per-waveguide constraints.
struct InfeasibleMatching : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Algorithm hit its cycle cap, or the exhaustive search exceeded its budget.
struct ConvergenceError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace pinchsim
