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
//
// Indoor multipath channel simulator: deterministic specular components from
// first-order image sources plus diffuse components from point scatterers on
// an ellipsoid, and the trajectory-driven CSI database generator built on it.

#ifndef BEAMDB_CHANNEL_HPP
#define BEAMDB_CHANNEL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "beamdb/linalg.hpp"
#include "beamdb/rng.hpp"

namespace beamdb
{

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 operator+(Vec3 a, Vec3 b);
Vec3 operator-(Vec3 a, Vec3 b);
Vec3 operator*(double s, Vec3 v);
double distance(Vec3 a, Vec3 b);

// Axis-aligned box [0, width_x] x [0, depth_y] x [0, height_z].
struct RoomGeometry
{
    double width_x = 5.0;
    double depth_y = 9.0;
    double height_z = 3.5;

    void validate() const;
    bool contains(Vec3 p, double tol = 1e-9) const;
};

enum class Wall
{
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax
};

// Uniform rectangular array mounted flush on one wall. Element positions are
// derived on construction; M = (floor(width/spacing)+1) * (floor(height/spacing)+1).
struct ArrayConfig
{
    Vec3 center;
    Wall wall = Wall::YMin;
    double width = 0.0;  // in-plane extent along the first wall axis, meters
    double height = 0.0; // in-plane extent along the second wall axis, meters
    double spacing = 0.0;
    double wavelength = 0.0;
    std::vector<Vec3> positions;

    std::size_t antenna_count() const { return positions.size(); }

    static ArrayConfig make(const RoomGeometry &room, Wall wall, Vec3 center,
                            double width, double height, double spacing, double wavelength);
    // Convenience: choose the aperture from element counts (n_u x n_v grid).
    static ArrayConfig make_elements(const RoomGeometry &room, Wall wall, Vec3 center,
                                     std::size_t n_u, std::size_t n_v,
                                     double spacing, double wavelength);
};

// Physical array (index 1, gain 1) or one of its first-order wall mirrors.
struct ImageSource
{
    int index = 1;
    Complex gain{1.0, 0.0};
    std::vector<Vec3> positions;
};

// Physical array plus one mirror per remaining wall (S = 6 for a box room).
std::vector<ImageSource> build_image_sources(const RoomGeometry &room,
                                             const ArrayConfig &array,
                                             double reflection_gain_db);

struct EllipsoidSpec
{
    Vec3 center{5.0, 8.75, 1.0};
    Vec3 semi_axes{1.5, 0.5, 1.5};

    void validate() const;
    double volume() const;
};

// Point scatterers on the ellipsoid surface with log-normal radar cross
// sections (m^2) and uniform phases.
struct ScattererField
{
    EllipsoidSpec ellipsoid;
    std::vector<Vec3> positions;
    std::vector<double> rcs;
    std::vector<double> phases;

    std::size_t count() const { return positions.size(); }
};

// Draws N_sc ~ Poisson(density * ellipsoid volume) scatterers placed uniformly
// on the surface; RCS values are log-normal with the given distribution mean
// and variance (both in linear m^2 / m^4 units).
ScattererField sample_scatterer_field(const EllipsoidSpec &ellipsoid, double density_per_m3,
                                      double rcs_mean_m2, double rcs_var_m4, Rng &rng);

// Specular response of one image source: entry m is
//   (lambda / (4 pi d_m)) * gain * exp(-j 2 pi d_m / lambda).
CVector smc_response(const ImageSource &source, Vec3 ue_pos, double wavelength);

// Diffuse response of one image source through the scatterer field
// (single-bounce transmit-array -> scatterer -> UE products).
CVector dmc_response(const ImageSource &source, const ScattererField &field,
                     Vec3 ue_pos, double wavelength);

struct Environment
{
    RoomGeometry room;
    ArrayConfig array;
    std::vector<ImageSource> sources;
    ScattererField field;

    double wavelength() const { return array.wavelength; }
    std::size_t antenna_count() const { return array.antenna_count(); }
};

// Full channel at a UE position: sum of all specular and diffuse components.
// Deterministic for a fixed environment.
CVector channel_at(const Environment &env, Vec3 ue_pos);

enum class TrajectoryKind
{
    Circular,
    Zigzag
};

struct TrajectorySpec
{
    TrajectoryKind kind = TrajectoryKind::Circular;
    // circular path
    double center_x = 2.5, center_y = 4.5, radius = 2.0;
    // zigzag serpentine over [x_lo, x_hi] x [y_lo, y_hi]
    double x_lo = 0.5, x_hi = 4.5, y_lo = 0.5, y_hi = 8.5, pitch = 1.0;
    std::size_t count = 1000;
    double noise_std = 0.05; // per-point Gaussian jitter in x and y, meters
    double z = 0.0;

    void validate(const RoomGeometry &room) const;
};

// Chronological UE positions along the noisy trajectory, clamped to the room.
std::vector<Vec3> generate_trajectory(const TrajectorySpec &spec, const RoomGeometry &room,
                                      Rng &rng);

// One random position on the same noisy path (uniform phase along the nominal
// trajectory plus the per-point jitter); used to draw sweep queries.
Vec3 sample_trajectory_point(const TrajectorySpec &spec, const RoomGeometry &room, Rng &rng);

struct CsiRecord
{
    std::int64_t index = 0;
    std::optional<double> timestamp;
    CVector h;
    std::optional<Vec3> position; // ground truth, evaluation only
};

struct CsiDatabase
{
    std::vector<CsiRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    std::size_t dim() const { return records.empty() ? 0 : records[0].h.dim(); }
    const CsiRecord &at(std::size_t i) const;

    void validate() const; // contiguous 0-based indices, uniform dimension
};

// Record i holds channel_at(trajectory[i]) with the position retained.
CsiDatabase generate_database(std::span<const Vec3> trajectory, const Environment &env,
                              std::optional<double> sample_interval = std::nullopt);

} // namespace beamdb

#endif
