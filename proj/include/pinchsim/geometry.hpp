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
#include <limits>
#include <span>
#include <string>

#include "pinchsim/errors.hpp"

namespace pinchsim
{

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3 &a, const Vec3 &b) { return norm(a - b); }

// Centered frame: x in [-width/2, width/2], y in [-depth/2, depth/2]; waveguides sit at z = height.
struct Region
{
    double width = 10.0;
    double depth = 10.0;
    double height = 3.0;

    void validate() const
    {
        if (!(width > 0.0) || !(depth > 0.0) || !(height > 0.0))
            throw GeometryError("Region dimensions must be positive.");
    }

    bool contains_xy(double x, double y) const
    {
        return std::abs(x) <= 0.5 * width && std::abs(y) <= 0.5 * depth;
    }
};

// Solid vertical cylinder standing on the ground plane.
struct Blockage
{
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 1.0;
    double height = 3.0;

    void validate() const
    {
        if (!std::isfinite(center_x) || !std::isfinite(center_y))
            throw GeometryError("Blockage center must be finite.");
        if (!(radius > 0.0) || !(height > 0.0))
            throw GeometryError("Blockage radius and height must be positive.");
    }
};

namespace detail
{

// Closed parameter interval [lo, hi]; empty when lo > hi.
struct Interval
{
    double lo;
    double hi;

    bool empty() const { return lo > hi; }
    Interval meet(const Interval &o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
};

// t-range over which the horizontal projection of a + t*(b - a) lies inside the disk.
inline Interval disk_interval(const Vec3 &a, const Vec3 &b, double cx, double cy, double r)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double ox = a.x - cx, oy = a.y - cy;
    const double qa = dx * dx + dy * dy;
    const double qb = ox * dx + oy * dy;
    const double qc = ox * ox + oy * oy - r * r;
    if (qa == 0.0)
        return qc <= 0.0 ? Interval{-inf, inf} : Interval{inf, -inf};
    const double disc = qb * qb - qa * qc;
    if (disc < 0.0)
        return {inf, -inf};
    const double s = std::sqrt(disc);
    return {(-qb - s) / qa, (-qb + s) / qa};
}

inline Interval height_interval(const Vec3 &a, const Vec3 &b, double h)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double dz = b.z - a.z;
    if (dz == 0.0)
        return (a.z >= 0.0 && a.z <= h) ? Interval{-inf, inf} : Interval{inf, -inf};
    const double t0 = (0.0 - a.z) / dz, t1 = (h - a.z) / dz;
    return {std::min(t0, t1), std::max(t0, t1)};
}

inline void check_segment(const Vec3 &a, const Vec3 &b)
{
    if (!a.finite() || !b.finite())
        throw GeometryError("Segment endpoints must be finite.");
    if (a == b)
        throw GeometryError("Degenerate segment: endpoints coincide.");
}

} // namespace detail

// Full 3D segment-vs-cylinder test. Grazing contact counts as blocked.
inline bool segment_blocked_3d(const Vec3 &a, const Vec3 &b, const Blockage &blk)
{
    detail::check_segment(a, b);
    const detail::Interval unit{0.0, 1.0};
    return !unit.meet(detail::disk_interval(a, b, blk.center_x, blk.center_y, blk.radius))
                .meet(detail::height_interval(a, b, blk.height))
                .empty();
}

// Projected segment-vs-disk test; equals the 3D test whenever the segment's z-range lies in [0, height].
inline bool segment_hits_disk_2d(const Vec3 &a, const Vec3 &b, const Blockage &blk)
{
    detail::check_segment(a, b);
    const detail::Interval unit{0.0, 1.0};
    return !unit.meet(detail::disk_interval(a, b, blk.center_x, blk.center_y, blk.radius)).empty();
}

inline bool segment_blocked(const Vec3 &a, const Vec3 &b, const Blockage &blk)
{
    const double zmin = std::min(a.z, b.z), zmax = std::max(a.z, b.z);
    if (zmin >= 0.0 && zmax <= blk.height)
        return segment_hits_disk_2d(a, b, blk);
    return segment_blocked_3d(a, b, blk);
}

// Binary LoS indicator: 1 iff no blockage intersects the direct segment.
inline int los_indicator(const Vec3 &antenna, const Vec3 &user, std::span<const Blockage> blockages)
{
    for (const auto &blk : blockages)
        if (segment_blocked(antenna, user, blk))
            return 0;
    return 1;
}

} // namespace pinchsim
