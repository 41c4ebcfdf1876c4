// SPDX-License-Identifier: Apache-2.0
//
// beamdb - data-driven robust beamforming from a historical CSI database
// Copyright (C) 2026 beamdb contributors
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

#include "beamdb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "beamdb/errors.hpp"

namespace beamdb
{

namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
} // namespace

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }

double distance(Vec3 a, Vec3 b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void RoomGeometry::validate() const
{
    if (!(width_x > 0.0) || !(depth_y > 0.0) || !(height_z > 0.0))
        throw ValidationError("room dimensions must be strictly positive");
}

bool RoomGeometry::contains(Vec3 p, double tol) const
{
    return p.x >= -tol && p.x <= width_x + tol && p.y >= -tol && p.y <= depth_y + tol &&
           p.z >= -tol && p.z <= height_z + tol;
}

namespace
{

// In-plane axes (u, v) and the fixed coordinate of a wall.
struct WallFrame
{
    Vec3 u, v;
    double plane_coord;
    int axis; // 0 = x, 1 = y, 2 = z
};

WallFrame wall_frame(const RoomGeometry &room, Wall wall)
{
    switch (wall)
    {
    case Wall::XMin: return {{0, 1, 0}, {0, 0, 1}, 0.0, 0};
    case Wall::XMax: return {{0, 1, 0}, {0, 0, 1}, room.width_x, 0};
    case Wall::YMin: return {{1, 0, 0}, {0, 0, 1}, 0.0, 1};
    case Wall::YMax: return {{1, 0, 0}, {0, 0, 1}, room.depth_y, 1};
    case Wall::ZMin: return {{1, 0, 0}, {0, 1, 0}, 0.0, 2};
    case Wall::ZMax: return {{1, 0, 0}, {0, 1, 0}, room.height_z, 2};
    }
    throw ValidationError("unknown wall");
}

double axis_coord(Vec3 p, int axis) { return axis == 0 ? p.x : (axis == 1 ? p.y : p.z); }

Vec3 mirror_across_wall(Vec3 p, const RoomGeometry &room, Wall wall)
{
    switch (wall)
    {
    case Wall::XMin: return {-p.x, p.y, p.z};
    case Wall::XMax: return {2.0 * room.width_x - p.x, p.y, p.z};
    case Wall::YMin: return {p.x, -p.y, p.z};
    case Wall::YMax: return {p.x, 2.0 * room.depth_y - p.y, p.z};
    case Wall::ZMin: return {p.x, p.y, -p.z};
    case Wall::ZMax: return {p.x, p.y, 2.0 * room.height_z - p.z};
    }
    throw ValidationError("unknown wall");
}

} // namespace

ArrayConfig ArrayConfig::make(const RoomGeometry &room, Wall wall, Vec3 center,
                              double width, double height, double spacing, double wavelength)
{
    room.validate();
    if (!(spacing > 0.0) || !(wavelength > 0.0))
        throw ValidationError("array spacing and wavelength must be positive");
    if (width < 0.0 || height < 0.0)
        throw ValidationError("array aperture must be non-negative");
    const std::size_t n_u = static_cast<std::size_t>(std::floor(width / spacing)) + 1;
    const std::size_t n_v = static_cast<std::size_t>(std::floor(height / spacing)) + 1;
    return make_elements(room, wall, center, n_u, n_v, spacing, wavelength);
}

ArrayConfig ArrayConfig::make_elements(const RoomGeometry &room, Wall wall, Vec3 center,
                                       std::size_t n_u, std::size_t n_v,
                                       double spacing, double wavelength)
{
    room.validate();
    if (n_u == 0 || n_v == 0)
        throw ValidationError("array needs at least one element per axis");
    if (!(spacing > 0.0) || !(wavelength > 0.0))
        throw ValidationError("array spacing and wavelength must be positive");

    const WallFrame frame = wall_frame(room, wall);
    if (std::abs(axis_coord(center, frame.axis) - frame.plane_coord) > 1e-9)
        throw ValidationError("array center does not lie on the requested wall plane");

    ArrayConfig cfg;
    cfg.center = center;
    cfg.wall = wall;
    cfg.width = static_cast<double>(n_u - 1) * spacing;
    cfg.height = static_cast<double>(n_v - 1) * spacing;
    cfg.spacing = spacing;
    cfg.wavelength = wavelength;
    cfg.positions.reserve(n_u * n_v);

    const double off_u = 0.5 * cfg.width;
    const double off_v = 0.5 * cfg.height;
    for (std::size_t j = 0; j < n_v; ++j)
        for (std::size_t i = 0; i < n_u; ++i)
        {
            const double du = static_cast<double>(i) * spacing - off_u;
            const double dv = static_cast<double>(j) * spacing - off_v;
            Vec3 p = center + du * frame.u + dv * frame.v;
            if (!room.contains(p, 1e-9))
                throw ValidationError("array aperture extends beyond the wall");
            cfg.positions.push_back(p);
        }
    return cfg;
}

std::vector<ImageSource> build_image_sources(const RoomGeometry &room,
                                             const ArrayConfig &array,
                                             double reflection_gain_db)
{
    room.validate();
    if (array.positions.empty())
        throw ValidationError("array has no antenna positions");
    const WallFrame frame = wall_frame(room, array.wall);
    for (const Vec3 &p : array.positions)
        if (std::abs(axis_coord(p, frame.axis) - frame.plane_coord) > 1e-9)
            throw ValidationError("array positions do not lie on a wall of the room");

    const double gain_mag = std::pow(10.0, reflection_gain_db / 20.0);

    std::vector<ImageSource> sources;
    sources.reserve(6);
    ImageSource physical;
    physical.index = 1;
    physical.gain = Complex(1.0, 0.0); // direct path, 0 dB
    physical.positions = array.positions;
    sources.push_back(std::move(physical));

    const Wall all_walls[] = {Wall::XMin, Wall::XMax, Wall::YMin,
                              Wall::YMax, Wall::ZMin, Wall::ZMax};
    int next_index = 2;
    for (Wall w : all_walls)
    {
        if (w == array.wall)
            continue; // the mirror in the array's own wall coincides with the array
        ImageSource img;
        img.index = next_index++;
        img.gain = Complex(gain_mag, 0.0);
        img.positions.reserve(array.positions.size());
        for (const Vec3 &p : array.positions)
            img.positions.push_back(mirror_across_wall(p, room, w));
        sources.push_back(std::move(img));
    }
    return sources;
}

void EllipsoidSpec::validate() const
{
    if (!(semi_axes.x > 0.0) || !(semi_axes.y > 0.0) || !(semi_axes.z > 0.0))
        throw ValidationError("ellipsoid semi-axes must be positive");
}

double EllipsoidSpec::volume() const
{
    return (4.0 / 3.0) * std::numbers::pi * semi_axes.x * semi_axes.y * semi_axes.z;
}

ScattererField sample_scatterer_field(const EllipsoidSpec &ellipsoid, double density_per_m3,
                                      double rcs_mean_m2, double rcs_var_m4, Rng &rng)
{
    ellipsoid.validate();
    if (!(density_per_m3 > 0.0))
        throw ValidationError("scatterer density must be positive");
    if (!(rcs_mean_m2 > 0.0) || rcs_var_m4 < 0.0)
        throw ValidationError("RCS mean must be positive and variance non-negative");

    ScattererField field;
    field.ellipsoid = ellipsoid;

    const std::uint64_t n = rng.poisson(density_per_m3 * ellipsoid.volume());

    // log-normal parameters from the distribution mean/variance of the variate
    const double ratio = rcs_var_m4 / (rcs_mean_m2 * rcs_mean_m2);
    const double v_log = std::log1p(ratio);
    const double mu_log = std::log(rcs_mean_m2) - 0.5 * v_log;
    const double sigma_log = std::sqrt(v_log);

    const double a = ellipsoid.semi_axes.x, b = ellipsoid.semi_axes.y, c = ellipsoid.semi_axes.z;
    const double min_axis = std::min({a, b, c});

    field.positions.reserve(n);
    field.rcs.reserve(n);
    field.phases.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
    {
        // Surface-uniform sampling: map sphere directions through the ellipsoid
        // and reject against the local area distortion.
        double ux, uy, uz;
        for (;;)
        {
            rng.unit_sphere(ux, uy, uz);
            const double area_factor =
                std::sqrt(ux * ux / (a * a) + uy * uy / (b * b) + uz * uz / (c * c));
            if (rng.uniform() * (1.0 / min_axis) <= area_factor)
                break;
        }
        field.positions.push_back(ellipsoid.center + Vec3{a * ux, b * uy, c * uz});
        field.rcs.push_back(rng.lognormal(mu_log, sigma_log));
        field.phases.push_back(rng.uniform(0.0, kTwoPi));
    }
    return field;
}

CVector smc_response(const ImageSource &source, Vec3 ue_pos, double wavelength)
{
    if (!(wavelength > 0.0))
        throw ValidationError("wavelength must be positive");
    if (source.positions.empty())
        throw ValidationError("image source has no antennas");
    CVector h = CVector::zeros(source.positions.size());
    for (std::size_t m = 0; m < source.positions.size(); ++m)
    {
        const double d = distance(source.positions[m], ue_pos);
        if (d <= 0.0)
            throw ValidationError("UE position coincides with an antenna");
        const double mag = wavelength / (kFourPi * d);
        h[m] = source.gain * std::polar(mag, -kTwoPi * d / wavelength);
    }
    return h;
}

CVector dmc_response(const ImageSource &source, const ScattererField &field,
                     Vec3 ue_pos, double wavelength)
{
    if (!(wavelength > 0.0))
        throw ValidationError("wavelength must be positive");
    const std::size_t m_count = source.positions.size();
    const std::size_t n_sc = field.count();
    CVector h = CVector::zeros(m_count);
    if (n_sc == 0)
        return h; // empty sum

    // per-scatterer factor: sqrt(rcs) e^{j phase} * (lambda/(4 pi d)) e^{-j 2 pi d / lambda}
    std::vector<Complex> scatter_rx(n_sc);
    for (std::size_t l = 0; l < n_sc; ++l)
    {
        const double d = distance(field.positions[l], ue_pos);
        if (d <= 0.0)
            throw ValidationError("UE position coincides with a scatterer");
        const Complex rx = std::polar(wavelength / (kFourPi * d), -kTwoPi * d / wavelength);
        scatter_rx[l] = std::polar(std::sqrt(field.rcs[l]), field.phases[l]) * rx;
    }

    const double tx_mag_scale = 1.0 / std::sqrt(kFourPi);
    for (std::size_t m = 0; m < m_count; ++m)
    {
        Complex acc(0.0, 0.0);
        for (std::size_t l = 0; l < n_sc; ++l)
        {
            const double d = distance(source.positions[m], field.positions[l]);
            if (d <= 0.0)
                throw ValidationError("scatterer coincides with an antenna");
            const Complex tx = std::polar(tx_mag_scale / d, -kTwoPi * d / wavelength);
            acc += tx * scatter_rx[l];
        }
        h[m] = source.gain * acc;
    }
    return h;
}

CVector channel_at(const Environment &env, Vec3 ue_pos)
{
    if (!env.room.contains(ue_pos))
        throw ValidationError("UE position lies outside the room");
    if (env.sources.empty())
        throw ValidationError("environment has no image sources");
    CVector h = CVector::zeros(env.antenna_count());
    for (const auto &src : env.sources)
        h += smc_response(src, ue_pos, env.wavelength());
    for (const auto &src : env.sources)
        h += dmc_response(src, env.field, ue_pos, env.wavelength());
    return h;
}

void TrajectorySpec::validate(const RoomGeometry &room) const
{
    room.validate();
    if (count == 0)
        throw ValidationError("trajectory needs at least one point");
    if (noise_std < 0.0)
        throw ValidationError("trajectory noise std must be non-negative");
    if (z < 0.0 || z > room.height_z)
        throw ValidationError("trajectory height lies outside the room");
    if (kind == TrajectoryKind::Circular)
    {
        if (!(radius > 0.0))
            throw ValidationError("circular trajectory radius must be positive");
        if (center_x - radius < 0.0 || center_x + radius > room.width_x ||
            center_y - radius < 0.0 || center_y + radius > room.depth_y)
            throw ValidationError("circular trajectory extends beyond the room");
    }
    else
    {
        if (!(x_hi > x_lo) || !(y_hi > y_lo))
            throw ValidationError("zigzag extent is empty");
        if (!(pitch > 0.0))
            throw ValidationError("zigzag pitch must be positive");
        if (x_lo < 0.0 || x_hi > room.width_x || y_lo < 0.0 || y_hi > room.depth_y)
            throw ValidationError("zigzag trajectory extends beyond the room");
    }
}

namespace
{

std::vector<Vec3> zigzag_polyline(const TrajectorySpec &spec)
{
    std::vector<Vec3> verts;
    double y = spec.y_lo;
    bool forward = true;
    for (;;)
    {
        verts.push_back({forward ? spec.x_lo : spec.x_hi, y, spec.z});
        verts.push_back({forward ? spec.x_hi : spec.x_lo, y, spec.z});
        if (y >= spec.y_hi - 1e-12)
            break;
        y = std::min(y + spec.pitch, spec.y_hi);
        forward = !forward;
    }
    return verts;
}

Vec3 point_on_polyline(const std::vector<Vec3> &verts, const std::vector<double> &cum,
                       double s)
{
    const double total = cum.back();
    s = std::clamp(s, 0.0, total);
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t seg = std::min(static_cast<std::size_t>(it - cum.begin()),
                               verts.size() - 1);
    if (seg == 0)
        return verts[0];
    const double seg_len = cum[seg] - cum[seg - 1];
    const double frac = seg_len > 0.0 ? (s - cum[seg - 1]) / seg_len : 0.0;
    return verts[seg - 1] + frac * (verts[seg] - verts[seg - 1]);
}

} // namespace

std::vector<Vec3> generate_trajectory(const TrajectorySpec &spec, const RoomGeometry &room,
                                      Rng &rng)
{
    spec.validate(room);
    std::vector<Vec3> points;
    points.reserve(spec.count);

    if (spec.kind == TrajectoryKind::Circular)
    {
        for (std::size_t i = 0; i < spec.count; ++i)
        {
            const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(spec.count);
            points.push_back({spec.center_x + spec.radius * std::cos(theta),
                              spec.center_y + spec.radius * std::sin(theta), spec.z});
        }
    }
    else
    {
        const std::vector<Vec3> verts = zigzag_polyline(spec);
        std::vector<double> cum(verts.size(), 0.0);
        for (std::size_t i = 1; i < verts.size(); ++i)
            cum[i] = cum[i - 1] + distance(verts[i - 1], verts[i]);
        const double total = cum.back();
        for (std::size_t i = 0; i < spec.count; ++i)
        {
            const double s = spec.count > 1
                                 ? total * static_cast<double>(i) / static_cast<double>(spec.count - 1)
                                 : 0.0;
            points.push_back(point_on_polyline(verts, cum, s));
        }
    }

    for (Vec3 &p : points)
    {
        p.x += spec.noise_std * rng.normal();
        p.y += spec.noise_std * rng.normal();
        p.x = std::clamp(p.x, 0.0, room.width_x);
        p.y = std::clamp(p.y, 0.0, room.depth_y);
        p.z = std::clamp(p.z, 0.0, room.height_z);
    }
    return points;
}

Vec3 sample_trajectory_point(const TrajectorySpec &spec, const RoomGeometry &room, Rng &rng)
{
    spec.validate(room);
    Vec3 p;
    if (spec.kind == TrajectoryKind::Circular)
    {
        const double theta = rng.uniform(0.0, kTwoPi);
        p = {spec.center_x + spec.radius * std::cos(theta),
             spec.center_y + spec.radius * std::sin(theta), spec.z};
    }
    else
    {
        const std::vector<Vec3> verts = zigzag_polyline(spec);
        std::vector<double> cum(verts.size(), 0.0);
        for (std::size_t i = 1; i < verts.size(); ++i)
            cum[i] = cum[i - 1] + distance(verts[i - 1], verts[i]);
        p = point_on_polyline(verts, cum, rng.uniform(0.0, cum.back()));
    }
    p.x = std::clamp(p.x + spec.noise_std * rng.normal(), 0.0, room.width_x);
    p.y = std::clamp(p.y + spec.noise_std * rng.normal(), 0.0, room.depth_y);
    p.z = std::clamp(p.z, 0.0, room.height_z);
    return p;
}

const CsiRecord &CsiDatabase::at(std::size_t i) const
{
    if (i >= records.size())
        throw ValidationError("database index " + std::to_string(i) + " out of range (size " +
                              std::to_string(records.size()) + ")");
    return records[i];
}

void CsiDatabase::validate() const
{
    const std::size_t m = dim();
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        if (records[i].index != static_cast<std::int64_t>(i))
            throw ValidationError("database indices are not contiguous from 0");
        if (records[i].h.dim() != m)
            throw ValidationError("database channel dimensions differ");
    }
}

CsiDatabase generate_database(std::span<const Vec3> trajectory, const Environment &env,
                              std::optional<double> sample_interval)
{
    if (trajectory.empty())
        throw ValidationError("trajectory is empty");
    CsiDatabase db;
    db.records.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i)
    {
        CsiRecord rec;
        rec.index = static_cast<std::int64_t>(i);
        if (sample_interval)
            rec.timestamp = static_cast<double>(i) * *sample_interval;
        rec.h = channel_at(env, trajectory[i]);
        rec.position = trajectory[i];
        db.records.push_back(std::move(rec));
    }
    return db;
}

} // namespace beamdb
