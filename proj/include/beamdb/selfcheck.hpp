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
// Built-in property and oracle checks behind the `verify` command. Each check
// is deterministic for a fixed seed and returns a machine-readable verdict.

#ifndef BEAMDB_SELFCHECK_HPP
#define BEAMDB_SELFCHECK_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "beamdb/linalg.hpp"

namespace beamdb
{

struct CheckResult
{
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

// taylor_minorant(h, f, w) <= |h^H f|^2 everywhere, equality at f = w.
// The minorant is injectable so tests can confirm the check catches mutants.
CheckResult check_minorant_soundness(
    std::size_t samples = 10000, std::uint64_t seed = 2024,
    const std::function<double(const CVector &, const CVector &, const CVector &)> &minorant = {});

// SCA epigraph traces are non-decreasing within eps on random instances.
CheckResult check_sca_ascent(std::size_t instances = 50, std::uint64_t seed = 2024,
                             double eps = 1e-8);

// K = 1 degenerates to MRT: gain L*P, every vector aligned with the channel;
// EBF matches at L = 1.
CheckResult check_exact_csi_k1(std::uint64_t seed = 2024);

// sca_design with random restarts reaches >= 98% of the M = 2 grid oracle.
CheckResult check_oracle_equivalence(std::size_t instances = 20, std::uint64_t seed = 2024,
                                     std::size_t restarts = 8);

// brute_force_oracle(S') <= brute_force_oracle(S) for nested channel sets.
CheckResult check_nested_monotonicity(std::size_t pairs = 20, std::uint64_t seed = 2024);

std::vector<CheckResult> run_verify_suite(std::uint64_t seed = 2024);

} // namespace beamdb

#endif
