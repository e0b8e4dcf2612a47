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

#include <cmath>
#include <cstddef>
#include <vector>

#include "pinchsim/channel.hpp"
#include "pinchsim/errors.hpp"
#include "pinchsim/matching_state.hpp"

namespace pinchsim
{

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Transmit power is split equally over the waveguides.
struct PowerBudget
{
    double total_power = 0.1;  // W
    double noise_power = 1e-11; // W

    double per_waveguide(std::size_t waveguides) const { return total_power / static_cast<double>(waveguides); }

    void validate() const
    {
        if (!(total_power > 0.0) || !std::isfinite(total_power))
            throw ConfigError("Transmit power must be positive.");
        if (!(noise_power > 0.0) || !std::isfinite(noise_power))
            throw ConfigError("Noise power must be positive.");
    }

    static PowerBudget from_dbm(double total_dbm, double noise_dbm)
    {
        return {dbm_to_watts(total_dbm), dbm_to_watts(noise_dbm)};
    }
};

struct RateReport
{
    std::vector<double> per_user; // bit/s/Hz
    double sum = 0.0;
};

namespace detail
{

// Assumes a feasible matching. Every waveguide radiates its own user's stream, so user n sees its
// assigned waveguide as signal and all others as interference.
inline double user_rate_unchecked(const ChannelTensor &t, const Matching &mu, double p, double noise, std::size_t n)
{
    const std::size_t own = mu.waveguide_of(n);
    double signal = 0.0, interference = 0.0;
    for (std::size_t k = 0; k < t.num_waveguides(); ++k)
    {
        const double g = p * std::norm(t.gain(k, mu.antenna_on(k), n));
        if (k == own)
            signal = g;
        else
            interference += g;
    }
    return std::log2(1.0 + signal / (interference + noise));
}

inline void check_dims(const ChannelTensor &t, const Matching &mu)
{
    if (t.num_users() != t.num_waveguides())
        throw InfeasibleMatching("Number of users must equal number of waveguides.");
    mu.require_feasible(t.num_users(), t.num_antennas());
}

} // namespace detail

inline double user_rate(const ChannelTensor &t, const Matching &mu, const PowerBudget &power, std::size_t n)
{
    detail::check_dims(t, mu);
    if (n >= t.num_users())
        throw std::out_of_range("User index out of range.");
    return detail::user_rate_unchecked(t, mu, power.per_waveguide(t.num_waveguides()), power.noise_power, n);
}

inline RateReport sum_rate(const ChannelTensor &t, const Matching &mu, const PowerBudget &power)
{
    detail::check_dims(t, mu);
    const double p = power.per_waveguide(t.num_waveguides());
    RateReport r;
    r.per_user.resize(t.num_users());
    for (std::size_t n = 0; n < t.num_users(); ++n)
    {
        r.per_user[n] = detail::user_rate_unchecked(t, mu, p, power.noise_power, n);
        r.sum += r.per_user[n];
    }
    return r;
}

} // namespace pinchsim
