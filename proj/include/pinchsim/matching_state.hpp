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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pinchsim/errors.hpp"

namespace pinchsim
{

// Three-sided one-to-one matching: every user holds one waveguide, every waveguide one active antenna.
// Stored as user -> waveguide, its inverse, and waveguide -> antenna.
class Matching
{
  public:
    Matching() = default;

    Matching(std::vector<std::size_t> assignment, std::vector<std::size_t> activation)
        : assignment_(std::move(assignment)), activation_(std::move(activation)), user_on_(assignment_.size())
    {
        const std::size_t n = assignment_.size();
        if (activation_.size() != n)
            throw InfeasibleMatching("Matching needs as many waveguides as users.");
        std::vector<bool> seen(n, false);
        for (std::size_t u = 0; u < n; ++u)
        {
            const std::size_t k = assignment_[u];
            if (k >= n || seen[k])
                throw InfeasibleMatching("User-to-waveguide assignment is not a permutation.");
            seen[k] = true;
            user_on_[k] = u;
        }
    }

    std::size_t size() const { return assignment_.size(); }
    std::size_t waveguide_of(std::size_t user) const { return assignment_.at(user); }
    std::size_t user_on(std::size_t waveguide) const { return user_on_.at(waveguide); }
    std::size_t antenna_on(std::size_t waveguide) const { return activation_.at(waveguide); }

    std::span<const std::size_t> assignment() const { return assignment_; }
    std::span<const std::size_t> activation() const { return activation_; }

    // Exchanges the waveguides of two users; active antennas stay with their waveguides.
    void swap_users(std::size_t a, std::size_t b)
    {
        const std::size_t ka = assignment_.at(a), kb = assignment_.at(b);
        assignment_[a] = kb;
        assignment_[b] = ka;
        user_on_[kb] = a;
        user_on_[ka] = b;
    }

    void set_antenna(std::size_t waveguide, std::size_t antenna) { activation_.at(waveguide) = antenna; }

    bool feasible(std::size_t users, std::size_t antennas) const
    {
        if (assignment_.size() != users || activation_.size() != users)
            return false;
        return std::all_of(activation_.begin(), activation_.end(), [&](std::size_t m) { return m < antennas; });
    }

    void require_feasible(std::size_t users, std::size_t antennas) const
    {
        if (!feasible(users, antennas))
            throw InfeasibleMatching("Matching does not fit the channel dimensions (N users, M antennas).");
    }

    friend bool operator==(const Matching &a, const Matching &b)
    {
        return a.assignment_ == b.assignment_ && a.activation_ == b.activation_;
    }

  private:
    std::vector<std::size_t> assignment_;
    std::vector<std::size_t> activation_;
    std::vector<std::size_t> user_on_;
};

} // namespace pinchsim
