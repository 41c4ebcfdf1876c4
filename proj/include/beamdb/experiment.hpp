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
// Experiment pipeline: database generation, single codebook designs, and the
// sweep harness producing deterministic CSV/JSON results.

#ifndef BEAMDB_EXPERIMENT_HPP
#define BEAMDB_EXPERIMENT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamdb/config.hpp"
#include "beamdb/io.hpp"

namespace beamdb
{

struct ResultRow
{
    double sweep_value = 0.0;
    std::string scheme; // MMS | EBF | MRT
    double gain_linear = 0.0;
    double gain_db = 0.0;
    std::size_t neighborhood_size = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0; // per-trial query stream seed
    std::string error;      // non-empty marks a failed trial
};

struct SweepSummaryRow
{
    double sweep_value = 0.0;
    std::string scheme;
    std::size_t samples = 0;
    double mean_linear = 0.0;
    double stderr_linear = 0.0;
    double mean_db = 0.0;
};

struct SweepResult
{
    std::vector<ResultRow> rows;
    std::vector<SweepSummaryRow> summary;
    Json metadata;
};

// Runs every sweep value x trial, evaluating MMS, EBF and MRT on the same
// neighborhood. Queries are drawn per trial (shared across sweep values) from
// the trajectory's noise model, and every task owns a derived RNG stream, so
// serial and parallel execution produce identical results.
SweepResult run_sweep(const ExperimentConfig &config);

// header: sweep_value,scheme,gain_db,K,trial,seed
std::string sweep_csv(std::span<const ResultRow> rows);

struct GenerateResult
{
    CsiDatabase db;
    Json metadata;
};

GenerateResult run_generate(const ExperimentConfig &config);

struct DesignRequest
{
    std::optional<std::size_t> query_index; // one of the two must be set
    std::optional<CVector> query_vector;
    NeighborhoodParams params;
    SolverConfig solver;
    std::size_t codebook_size = 1;
    double power_dbw = 0.0;
};

struct DesignOutcome
{
    NeighborhoodList neighborhood;
    Codebook codebook;
    SolverReport report;
    double mms_gain = 0.0;
    double ebf_gain = 0.0;
    double mrt_gain = 0.0;
    Json codebook_json;
    Json comparison_json;
};

DesignOutcome run_design(const CsiDatabase &db, const DesignRequest &request);

} // namespace beamdb

#endif
