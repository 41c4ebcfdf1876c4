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

#include "beamdb/config.hpp"

#include <cmath>

#include "beamdb/errors.hpp"

namespace beamdb
{

namespace
{
// stream tags for deriving independent substreams from the master seed
constexpr std::uint64_t kTagScatterers = 0x5ca77e12ULL;
} // namespace

ArrayConfig ArraySpec::build(const RoomGeometry &room) const
{
    if (!(carrier_hz > 0.0))
        throw ValidationError("array carrier frequency must be positive");
    if (!(spacing_over_lambda > 0.0))
        throw ValidationError("array element spacing must be positive");
    const double lambda = wavelength();
    const double spacing = spacing_over_lambda * lambda;
    if (width_m && height_m && !(elements_u && elements_v))
        return ArrayConfig::make(room, wall, center, *width_m, *height_m, spacing, lambda);
    const std::size_t n_u = elements_u.value_or(8);
    const std::size_t n_v = elements_v.value_or(4);
    return ArrayConfig::make_elements(room, wall, center, n_u, n_v, spacing, lambda);
}

Environment build_environment(const EnvironmentSpec &spec, std::uint64_t seed)
{
    spec.room.validate();
    Environment env;
    env.room = spec.room;
    env.array = spec.array.build(spec.room);
    env.sources = build_image_sources(spec.room, env.array, spec.reflection_gain_db);
    Rng rng(derive_seed(seed, kTagScatterers));
    env.field = sample_scatterer_field(spec.scatterers.ellipsoid, spec.scatterers.density_per_m3,
                                       spec.scatterers.rcs_mean_m2(), spec.scatterers.rcs_var_m4(),
                                       rng);
    return env;
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw ValidationError("sweep values must not be empty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw ValidationError("sweep values must be strictly increasing");
    if (axis == SweepAxis::Threshold)
    {
        for (double v : values)
            if (!(v > 0.0) || v > 1.0)
                throw ValidationError("threshold sweep values must lie in (0, 1]");
    }
    else
    {
        for (double v : values)
            if (v < 1.0 || v != std::floor(v))
                throw ValidationError("sweep values on this axis must be positive integers");
    }
}

double ExperimentConfig::power_watts() const
{
    return std::pow(10.0, power_dbw / 10.0);
}

void ExperimentConfig::validate() const
{
    env.room.validate();
    trajectory.validate(env.room);
    neighborhood.validate();
    sweep.validate();
    if (codebook_size == 0)
        throw ValidationError("codebook size must be >= 1");
    if (trials == 0)
        throw ValidationError("trial count must be >= 1");
    if (solver.max_outer == 0)
        throw ValidationError("solver iteration cap must be >= 1");
    if (!(solver.eps_outer > 0.0) || !(solver.eps_inner > 0.0))
        throw ValidationError("solver tolerances must be positive");
}

} // namespace beamdb
