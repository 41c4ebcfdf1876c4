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

#ifndef BEAMDB_CONFIG_HPP
#define BEAMDB_CONFIG_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "beamdb/channel.hpp"
#include "beamdb/neighborhood.hpp"
#include "beamdb/optimizer.hpp"

namespace beamdb
{

inline constexpr double kSpeedOfLight = 299792458.0;

// Antenna array description as configured (element counts take precedence over
// a metric aperture when both are present).
struct ArraySpec
{
    Wall wall = Wall::YMin;
    Vec3 center{2.5, 0.0, 1.0};
    std::optional<std::size_t> elements_u; // default 8 x 4 desk-scale URA
    std::optional<std::size_t> elements_v;
    std::optional<double> width_m; // the full-aperture alternative
    std::optional<double> height_m;
    double carrier_hz = 2.4e9;
    double spacing_over_lambda = 0.5;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    ArrayConfig build(const RoomGeometry &room) const;
};

// Scatterer statistics in the units the values are usually quoted in; lengths
// convert to meters when the field is sampled.
struct ScattererSpec
{
    EllipsoidSpec ellipsoid;
    double density_per_m3 = 10.0;
    double rcs_mean_cm2 = 1e2 * std::numbers::pi; // 100 pi cm^2
    double rcs_var_cm4 = 20.0 * std::numbers::pi; // 20 pi cm^4

    double rcs_mean_m2() const { return rcs_mean_cm2 * 1e-4; }
    double rcs_var_m4() const { return rcs_var_cm4 * 1e-8; }
};

struct EnvironmentSpec
{
    RoomGeometry room;
    ArraySpec array;
    double reflection_gain_db = -3.0;
    ScattererSpec scatterers;
};

// Deterministic for a fixed (spec, seed) pair; the scatterer field is the only
// random element.
Environment build_environment(const EnvironmentSpec &spec, std::uint64_t seed);

enum class SweepAxis
{
    Neighbors,    // initial-list size T
    Threshold,    // closeness threshold gamma
    CodebookSize, // L
};

struct SweepSpec
{
    SweepAxis axis = SweepAxis::Neighbors;
    std::vector<double> values{1, 3, 5, 8};

    void validate() const;
};

struct ExperimentConfig
{
    std::uint64_t seed = 1;
    EnvironmentSpec env;
    TrajectorySpec trajectory;
    std::optional<double> sample_interval; // seconds between records; null = no timestamps
    NeighborhoodParams neighborhood;
    SolverConfig solver;
    std::size_t codebook_size = 1;
    double power_dbw = 0.0;
    SweepSpec sweep;
    std::size_t trials = 20;
    std::size_t threads = 0; // 0 = hardware concurrency

    double power_watts() const;
    void validate() const;
};

} // namespace beamdb

#endif
