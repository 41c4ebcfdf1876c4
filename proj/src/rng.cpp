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

#include "beamdb/rng.hpp"

#include <cmath>

namespace beamdb
{

double Rng::normal(double mean, double stddev)
{
    if (has_spare_)
    {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return mean + stddev * u * f;
}

double Rng::lognormal(double mu_log, double sigma_log)
{
    return std::exp(normal(mu_log, sigma_log));
}

std::uint64_t Rng::poisson(double mean)
{
    std::uint64_t total = 0;
    // Knuth's product method is exact but needs exp(-mean) > 0; chunk the mean.
    while (mean > 500.0)
    {
        total += poisson(500.0);
        mean -= 500.0;
    }
    if (mean <= 0.0)
        return total;
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t count = 0;
    do
    {
        prod *= uniform();
        ++count;
    } while (prod > limit);
    return total + count - 1;
}

void Rng::unit_sphere(double &x, double &y, double &z)
{
    double r2;
    do
    {
        x = normal();
        y = normal();
        z = normal();
        r2 = x * x + y * y + z * z;
    } while (r2 < 1e-30);
    double inv = 1.0 / std::sqrt(r2);
    x *= inv;
    y *= inv;
    z *= inv;
}

std::uint64_t mix_seed(std::uint64_t seed)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag)
{
    return mix_seed(master ^ mix_seed(tag));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index)
{
    return mix_seed(derive_seed(master, tag) ^ mix_seed(index + 0x517cc1b727220a95ULL));
}

} // namespace beamdb
