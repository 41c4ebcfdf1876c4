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

#ifndef BEAMDB_OPTIMIZER_HPP
#define BEAMDB_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamdb/linalg.hpp"
#include "beamdb/socp.hpp"

namespace beamdb
{

// L beamforming vectors sharing dimension M, each within the power budget.
struct Codebook
{
    std::vector<CVector> vectors;
    double power = 1.0;

    Codebook() = default;
    Codebook(std::vector<CVector> vecs, double p);

    std::size_t size() const { return vectors.size(); }
    std::size_t dim() const { return vectors.empty() ? 0 : vectors[0].dim(); }
};

// min over channels of sum_l |h^H f_l|^2 / ||h||^2 (linear scale)
double min_sum_gain(const Codebook &cb, std::span<const CVector> channels);

double to_db(double linear_gain);

CVector mrt_beamformer(const CVector &g, double power); // sqrt(P) g/||g||

// The paper's MRT evaluation rule: L * P * min_i closeness(g, h_i). Equals
// min_sum_gain of the codebook holding L copies of the MRT beamformer.
double mrt_baseline_gain(const CVector &g, double power, std::size_t L,
                         std::span<const CVector> channels);
Codebook mrt_codebook(const CVector &g, double power, std::size_t L);

// Dominant eigenvectors of the (1/K)-normalized neighborhood covariance,
// scaled to full power.
Codebook ebf_codebook(std::span<const CVector> channels, double power, std::size_t L);

// First-order minorant of |h^H f|^2 around the anchor w:
//   2 Re(f^H h h^H w) - |h^H w|^2
double taylor_minorant(const CVector &h, const CVector &f, const CVector &w);

enum class InitStrategy
{
    Mrt,          // L copies of the MRT beamformer for the query
    Ebf,          // EBF codebook
    BestBaseline, // better of the two above under min_sum_gain
    Random,       // random full-power directions (seeded)
    Given,        // caller-supplied codebook
};

struct SolverConfig
{
    std::size_t max_outer = 200;
    double eps_outer = 1e-6; // relative objective change
    double eps_inner = 1e-9; // certified subproblem gap
    InitStrategy init = InitStrategy::BestBaseline;
    std::optional<CVector> query; // needed by Mrt / BestBaseline
    std::optional<Codebook> given;
    std::size_t restarts = 0; // extra random-start runs, best result kept
    std::uint64_t seed = 1;   // for Random init and restarts
};

struct SolverReport
{
    std::vector<double> t_trace;    // epigraph value per outer iteration (t[0] = gain at init)
    std::vector<double> gain_trace; // true min_sum_gain per iterate
    std::vector<SocpDiagnostics> subproblem_diags;
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t best_iteration = 0; // iterate with the largest true gain
    double best_gain = 0.0;
    std::string init_label;
};

struct DesignResult
{
    Codebook codebook;
    SolverReport report;
};

// Algorithm: successive convex approximation on the max-min-sum codebook
// problem. Each outer iteration solves one convexified subproblem around the
// current iterate; the true objective ascends within the certified subproblem
// gap. Returns the iterate (including the initial codebook) with the best true
// objective, so with a baseline start the result never falls below that
// baseline. With config.restarts > 0, reruns from random starts and keeps the
// overall best.
DesignResult sca_design(std::span<const CVector> channels, double power, std::size_t L,
                        const SolverConfig &config);

// Exhaustive reference for M = 2, L = 1: sweeps f = sqrt(P) (cos u, sin u e^{jv})
// over a resolution x resolution grid and returns the best min gain found.
// Other dimensions or codebook sizes are rejected.
double brute_force_oracle(std::span<const CVector> channels, double power,
                          std::size_t L = 1, std::size_t resolution = 512);

} // namespace beamdb

#endif
