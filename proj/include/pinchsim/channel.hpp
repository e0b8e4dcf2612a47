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
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinchsim/errors.hpp"
#include "pinchsim/geometry.hpp"

namespace pinchsim
{

using cplx = std::complex<double>;

inline constexpr double speed_of_light = 2.99792458e8; // m/s

struct RadioConstants
{
    double carrier_frequency = 28e9; // Hz

    double wavelength() const { return speed_of_light / carrier_frequency; }
    // Free-space path loss coefficient c / (4 pi f_c), in meters.
    double path_loss_coefficient() const { return speed_of_light / (4.0 * std::numbers::pi * carrier_frequency); }

    void validate() const
    {
        if (!(carrier_frequency > 0.0) || !std::isfinite(carrier_frequency))
            throw ConfigError("Carrier frequency must be positive.");
    }
};

struct Scatterer
{
    Vec3 position;
    cplx gain{1.0, 0.0};
};

namespace detail
{
// -2 pi r / lambda reduced to (-2 pi, 0] before the trig call.
inline double propagation_phase(double r, double lambda)
{
    const double cycles = r / lambda;
    return -2.0 * std::numbers::pi * (cycles - std::floor(cycles));
}
} // namespace detail

// Spherical-wave direct path: eta * exp(-j 2 pi r / lambda) / r.
inline cplx los_component(const Vec3 &antenna, const Vec3 &user, const RadioConstants &radio)
{
    const double r = distance(antenna, user);
    if (!(r > 0.0))
        throw GeometryError("LoS component undefined at zero distance.");
    return std::polar(radio.path_loss_coefficient() / r, detail::propagation_phase(r, radio.wavelength()));
}

// Single-bounce scatterer paths; never blocked.
inline cplx nlos_component(const Vec3 &antenna, const Vec3 &user, std::span<const Scatterer> scatterers,
                           const RadioConstants &radio)
{
    const double eta = radio.path_loss_coefficient();
    const double lambda = radio.wavelength();
    cplx h{0.0, 0.0};
    for (const auto &s : scatterers)
    {
        const double r_user = distance(user, s.position);
        const double r_ant = distance(antenna, s.position);
        if (!(r_user > 0.0) || !(r_ant > 0.0))
            throw GeometryError("Scatterer coincides with an antenna or a user.");
        h += s.gain * std::polar(eta / (r_user * r_ant), detail::propagation_phase(r_user + r_ant, lambda));
    }
    return h;
}

inline cplx mixed_channel(int los, cplx h_los, cplx h_nlos)
{
    if (los != 0 && los != 1)
        throw std::invalid_argument("LoS indicator must be 0 or 1.");
    return los == 1 ? h_los + h_nlos : h_nlos;
}

struct ChannelEntry
{
    cplx gain;
    int los = 0;
    double distance = 0.0; // antenna <-> user

    friend bool operator==(const ChannelEntry &, const ChannelEntry &) = default;
};

// Per-(waveguide, antenna, user) gains, LoS indicators and distances.
class ChannelTensor
{
  public:
    ChannelTensor() = default;
    ChannelTensor(std::size_t waveguides, std::size_t antennas, std::size_t users)
        : k_(waveguides), m_(antennas), n_(users), entries_(waveguides * antennas * users)
    {
    }

    std::size_t num_waveguides() const { return k_; }
    std::size_t num_antennas() const { return m_; }
    std::size_t num_users() const { return n_; }

    const ChannelEntry &at(std::size_t k, std::size_t m, std::size_t n) const { return entries_[index(k, m, n)]; }
    ChannelEntry &at(std::size_t k, std::size_t m, std::size_t n) { return entries_[index(k, m, n)]; }

    cplx gain(std::size_t k, std::size_t m, std::size_t n) const { return at(k, m, n).gain; }
    int los(std::size_t k, std::size_t m, std::size_t n) const { return at(k, m, n).los; }
    double distance(std::size_t k, std::size_t m, std::size_t n) const { return at(k, m, n).distance; }

    std::span<const ChannelEntry> entries() const { return entries_; }

    friend bool operator==(const ChannelTensor &, const ChannelTensor &) = default;

  private:
    std::size_t index(std::size_t k, std::size_t m, std::size_t n) const
    {
        if (k >= k_ || m >= m_ || n >= n_)
            throw std::out_of_range("ChannelTensor index out of range.");
        return (k * m_ + m) * n_ + n;
    }

    std::size_t k_ = 0, m_ = 0, n_ = 0;
    std::vector<ChannelEntry> entries_;
};

// antennas[k][m] is the position of antenna m on waveguide k; every waveguide carries the same count.
inline ChannelTensor build_channel_tensor(std::span<const std::vector<Vec3>> antennas, std::span<const Vec3> users,
                                          std::span<const Scatterer> scatterers, std::span<const Blockage> blockages,
                                          const RadioConstants &radio)
{
    if (antennas.empty() || users.empty())
        throw ConfigError("Channel tensor needs at least one waveguide and one user.");
    const std::size_t M = antennas.front().size();
    if (M == 0)
        throw ConfigError("Each waveguide needs at least one antenna.");
    for (const auto &row : antennas)
        if (row.size() != M)
            throw ConfigError("All waveguides must carry the same number of antennas.");

    ChannelTensor t(antennas.size(), M, users.size());
    for (std::size_t k = 0; k < antennas.size(); ++k)
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < users.size(); ++n)
            {
                const Vec3 &a = antennas[k][m];
                const Vec3 &u = users[n];
                auto &e = t.at(k, m, n);
                e.los = los_indicator(a, u, blockages);
                e.distance = pinchsim::distance(a, u);
                e.gain = mixed_channel(e.los, los_component(a, u, radio), nlos_component(a, u, scatterers, radio));
            }
    return t;
}

// With exactly one active antenna per waveguide the activation-weighted sum reduces to one entry.
inline cplx effective_channel(const ChannelTensor &t, std::size_t k, std::span<const std::size_t> activation,
                              std::size_t n)
{
    if (k >= activation.size())
        throw std::out_of_range("Waveguide index out of range.");
    if (activation[k] >= t.num_antennas())
        throw std::out_of_range("Activated antenna index out of range.");
    return t.gain(k, activation[k], n);
}

} // namespace pinchsim
