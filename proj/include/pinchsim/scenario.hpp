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
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pinchsim/channel.hpp"
#include "pinchsim/errors.hpp"
#include "pinchsim/geometry.hpp"
#include "pinchsim/matching_state.hpp"
#include "pinchsim/rate.hpp"

namespace pinchsim
{

// ---------- seeding ----------

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent random streams of one trial. New streams must take fresh ids so that existing
// streams (and every sweep built on them) keep their values.
enum class Stream : std::uint64_t
{
    Users = 1,
    Scatterers = 2,
    InitialMatching = 3,
};

// Trial seeds depend only on (master seed, trial index), never on the sweep value, so every
// point of a sweep sees the same users, scatterers and initial matching.
inline constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial)
{
    return splitmix64(master ^ splitmix64(trial));
}

inline constexpr std::uint64_t stream_seed(std::uint64_t trial, Stream s)
{
    return splitmix64(trial + 0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(s));
}

inline std::mt19937_64 make_stream(std::uint64_t trial, Stream s) { return std::mt19937_64(stream_seed(trial, s)); }

// ---------- scenario ----------

// Override set for scenario generation. Unset optionals fall back to the layout defaults.
struct ScenarioConfig
{
    std::size_t users = 4; // also the number of waveguides
    std::size_t antennas = 20;
    std::size_t scatterers = 3;
    Region region{10.0, 10.0, 3.0};
    double carrier_frequency = 28e9;
    double transmit_power_dbm = 20.0;
    double noise_power_dbm = -80.0;
    double blockage_radius = 1.0;
    double blockage_height = 3.0;
    std::optional<std::vector<std::pair<double, double>>> blockage_centers;
    std::optional<std::vector<double>> waveguide_y;
    std::optional<std::vector<std::vector<double>>> antenna_x; // one row shared, or one row per waveguide
    // Redraw users whose ground position falls inside a blockage footprint (off: users are kept).
    bool users_outside_blockages = false;
};

inline std::vector<std::pair<double, double>> default_blockage_centers()
{
    return {{-2.5, -2.5}, {-2.5, 0.0}, {-2.5, 2.5}, {2.5, -2.5}, {2.5, 0.0}, {2.5, 2.5}};
}

// Parallel waveguides 0.25 m apart, centered on y = 0: (+-0.125, +-0.375) for four waveguides.
inline std::vector<double> default_waveguide_y(std::size_t k)
{
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i)
        y[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(k - 1)) * 0.25;
    return y;
}

// Uniform grid at cell centers: x_m = -D_x/2 + (m + 1/2) D_x / M for m = 0..M-1.
inline std::vector<double> uniform_antenna_grid(std::size_t m, double width)
{
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i)
        x[i] = -0.5 * width + (static_cast<double>(i) + 0.5) * width / static_cast<double>(m);
    return x;
}

struct Scenario
{
    Region region;
    std::vector<double> waveguide_y;
    std::vector<std::vector<double>> antenna_x; // [waveguide][antenna]
    std::vector<Vec3> users;
    std::vector<Scatterer> scatterers;
    std::vector<Blockage> blockages;
    RadioConstants radio;
    PowerBudget power;
    std::uint64_t seed = 0;

    std::size_t num_waveguides() const { return waveguide_y.size(); }
    std::size_t num_antennas() const { return antenna_x.empty() ? 0 : antenna_x.front().size(); }
    std::size_t num_users() const { return users.size(); }

    std::vector<std::vector<Vec3>> antenna_positions() const
    {
        std::vector<std::vector<Vec3>> pos(waveguide_y.size());
        for (std::size_t k = 0; k < waveguide_y.size(); ++k)
            for (double x : antenna_x.at(k))
                pos[k].push_back({x, waveguide_y[k], region.height});
        return pos;
    }

    void validate() const
    {
        region.validate();
        radio.validate();
        power.validate();
        if (users.empty())
            throw ConfigError("Scenario needs at least one user.");
        if (users.size() != waveguide_y.size())
            throw ConfigError("Number of users must equal number of waveguides.");
        if (antenna_x.size() != waveguide_y.size())
            throw ConfigError("Need one antenna row per waveguide.");
        for (std::size_t k = 0; k < waveguide_y.size(); ++k)
        {
            if (!region.contains_xy(0.0, waveguide_y[k]))
                throw ConfigError("Waveguide lies outside the region.");
            for (std::size_t j = 0; j < k; ++j)
                if (waveguide_y[j] == waveguide_y[k])
                    throw ConfigError("Waveguide positions must be pairwise distinct.");
            const auto &row = antenna_x[k];
            if (row.empty() || row.size() != antenna_x.front().size())
                throw ConfigError("Every waveguide needs the same, nonzero number of antennas.");
            for (std::size_t m = 0; m < row.size(); ++m)
            {
                if (!region.contains_xy(row[m], waveguide_y[k]))
                    throw ConfigError("Antenna lies outside the region.");
                if (m > 0 && !(row[m] > row[m - 1]))
                    throw ConfigError("Antenna positions must be strictly increasing along the waveguide.");
            }
        }
        for (const auto &u : users)
            if (!u.finite() || u.z != 0.0 || !region.contains_xy(u.x, u.y))
                throw ConfigError("User position outside the region or off the ground plane.");
        for (const auto &s : scatterers)
            if (!s.position.finite() || s.position.z != 0.0 || !region.contains_xy(s.position.x, s.position.y))
                throw ConfigError("Scatterer position outside the region or off the ground plane.");
        for (const auto &b : blockages)
        {
            b.validate();
            if (!region.contains_xy(b.center_x, b.center_y))
                throw ConfigError("Blockage center outside the region.");
        }
    }
};

inline void validate(const ScenarioConfig &c)
{
    if (c.users == 0)
        throw ConfigError("num_users must be at least 1.");
    if (c.antennas == 0)
        throw ConfigError("num_antennas must be at least 1.");
    c.region.validate();
    if (!(c.blockage_radius > 0.0) || !(c.blockage_height > 0.0))
        throw ConfigError("Blockage radius and height must be positive.");
    if (!std::isfinite(c.transmit_power_dbm) || !std::isfinite(c.noise_power_dbm))
        throw ConfigError("Power levels must be finite.");
    if (c.waveguide_y && c.waveguide_y->size() != c.users)
        throw ConfigError("waveguide_y must list one position per user (N = K).");
    if (c.antenna_x)
    {
        if (c.antenna_x->size() != 1 && c.antenna_x->size() != c.users)
            throw ConfigError("antenna_x must be one shared row or one row per waveguide.");
        for (const auto &row : *c.antenna_x)
            if (row.size() != c.antennas)
                throw ConfigError("antenna_x rows must have num_antennas entries.");
    }
}

inline std::vector<Blockage> make_blockages(const ScenarioConfig &c)
{
    std::vector<Blockage> out;
    for (const auto &[x, y] : c.blockage_centers.value_or(default_blockage_centers()))
        out.push_back({x, y, c.blockage_radius, c.blockage_height});
    return out;
}

// Users and scatterers uniform over the region, scatterer gains CN(0, 1). Scatterers are drawn
// sequentially, so the first L of a larger draw equal a draw of L.
inline Scenario default_scenario(const ScenarioConfig &c, std::uint64_t seed)
{
    validate(c);
    Scenario s;
    s.region = c.region;
    s.seed = seed;
    s.radio = RadioConstants{c.carrier_frequency};
    s.power = PowerBudget::from_dbm(c.transmit_power_dbm, c.noise_power_dbm);
    s.waveguide_y = c.waveguide_y.value_or(default_waveguide_y(c.users));
    if (c.antenna_x)
        s.antenna_x = c.antenna_x->size() == 1 ? std::vector(c.users, c.antenna_x->front()) : *c.antenna_x;
    else
        s.antenna_x.assign(c.users, uniform_antenna_grid(c.antennas, c.region.width));
    s.blockages = make_blockages(c);

    std::uniform_real_distribution<double> ux(-0.5 * c.region.width, 0.5 * c.region.width);
    std::uniform_real_distribution<double> uy(-0.5 * c.region.depth, 0.5 * c.region.depth);

    auto inside_blockage = [&](double x, double y) {
        return std::any_of(s.blockages.begin(), s.blockages.end(), [&](const Blockage &b) {
            return std::hypot(x - b.center_x, y - b.center_y) <= b.radius;
        });
    };
    auto user_rng = make_stream(seed, Stream::Users);
    constexpr std::size_t max_draws = 100000;
    for (std::size_t n = 0, draws = 0; n < c.users;)
    {
        if (++draws > max_draws)
            throw ConfigError("Blockages cover (almost) the whole region; cannot place users outside them.");
        const double x = ux(user_rng);
        const double y = uy(user_rng);
        if (c.users_outside_blockages && inside_blockage(x, y))
            continue;
        s.users.push_back({x, y, 0.0});
        ++n;
    }

    auto scat_rng = make_stream(seed, Stream::Scatterers);
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    for (std::size_t l = 0; l < c.scatterers; ++l)
    {
        const double x = ux(scat_rng);
        const double y = uy(scat_rng);
        const double re = half(scat_rng);
        const double im = half(scat_rng);
        s.scatterers.push_back({{x, y, 0.0}, {re, im}});
    }
    s.validate();
    return s;
}

// Conventional benchmark: a single antenna per waveguide at the region's center x.
inline Scenario fixed_center_variant(const Scenario &s)
{
    Scenario out = s;
    out.antenna_x.assign(s.num_waveguides(), std::vector<double>{0.0});
    return out;
}

inline ChannelTensor build_channel_tensor(const Scenario &s)
{
    const auto antennas = s.antenna_positions();
    return build_channel_tensor(antennas, s.users, s.scatterers, s.blockages, s.radio);
}

// Uniform random permutation plus a uniform antenna per waveguide, from the trial's matching stream.
inline Matching random_baseline(std::size_t users, std::size_t antennas, std::uint64_t seed)
{
    if (users == 0 || antennas == 0)
        throw ConfigError("Random matching needs at least one user and one antenna.");
    auto rng = make_stream(seed, Stream::InitialMatching);
    std::vector<std::size_t> assignment(users);
    for (std::size_t i = 0; i < users; ++i)
        assignment[i] = i;
    std::shuffle(assignment.begin(), assignment.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, antennas - 1);
    std::vector<std::size_t> activation(users);
    for (auto &m : activation)
        m = pick(rng);
    return Matching(std::move(assignment), std::move(activation));
}

} // namespace pinchsim
