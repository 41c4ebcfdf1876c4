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

#ifndef BEAMDB_SOCP_HPP
#define BEAMDB_SOCP_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "beamdb/linalg.hpp"

namespace beamdb
{

struct SocpDiagnostics
{
    std::size_t newton_steps = 0;
    std::size_t barrier_stages = 0;
    double duality_gap = 0.0;  // certified bound on t* - t, in original gain units
    double kkt_residual = 0.0; // Lagrangian stationarity residual at exit
    double min_slack = 0.0;    // smallest constraint slack at exit (normalized units)
    bool converged = false;
};

struct SubproblemResult
{
    std::vector<CVector> vectors; // f_1..f_L, strictly power-feasible
    double t = 0.0;               // epigraph value attained
    SocpDiagnostics diag;
};

// One convexified codebook subproblem:
//
//   maximize    t
//   subject to  sum_l [ 2 Re(f_l^H h_k h_k^H w_l) - |h_k^H w_l|^2 ] >= t ||h_k||^2   (k in [K])
//               ||f_l||^2 <= P                                                       (l in [L])
//
// The anchor w must itself satisfy the power budget. Solved as a second-order
// cone program over the real/imaginary parts by a log-barrier path-following
// method; channels are normalized to unit norm and powers to P = 1 internally
// so the barrier works on O(1) quantities. The returned point is strictly
// primal-feasible and its optimality gap (from the barrier dual point) is
// certified to be at most eps_inner; otherwise a SolverError is thrown.
SubproblemResult solve_subproblem(std::span<const CVector> channels,
                                  std::span<const CVector> anchor,
                                  double power,
                                  double eps_inner);

} // namespace beamdb

#endif
