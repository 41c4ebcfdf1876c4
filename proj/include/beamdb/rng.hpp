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

#ifndef BEAMDB_RNG_HPP
#define BEAMDB_RNG_HPP

#include <cstdint>
#include <random>

namespace beamdb
{

// Deterministic random stream. mt19937_64 is fully specified by the standard
// and the sampling transforms below are implemented here rather than taken
// from <random> distributions, whose output sequences differ between standard
// library implementations. Two builds with the same seed therefore draw the
// same values.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of entropy.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; caches the spare draw.
    double normal(double mean = 0.0, double stddev = 1.0);

    double lognormal(double mu_log, double sigma_log);

    // Exact Poisson sampling. Large means are split into independent chunks so
    // the product method never underflows.
    std::uint64_t poisson(double mean);

    // Uniform direction on the unit sphere (x, y, z written in place).
    void unit_sphere(double &x, double &y, double &z);

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index);

} // namespace beamdb

#endif
