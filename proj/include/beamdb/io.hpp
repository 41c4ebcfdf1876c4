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
// File formats: JSON-lines CSI databases with a JSON metadata sidecar, JSON
// config documents, and JSON exports for neighborhoods and codebooks.

#ifndef BEAMDB_IO_HPP
#define BEAMDB_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "beamdb/channel.hpp"
#include "beamdb/config.hpp"
#include "beamdb/neighborhood.hpp"
#include "beamdb/optimizer.hpp"

namespace beamdb
{

using Json = nlohmann::json;

// ---- config documents -------------------------------------------------

Json experiment_config_to_json(const ExperimentConfig &config);
// Accepts a config document or a database-metadata document (unwraps "config").
ExperimentConfig experiment_config_from_json(const Json &doc);

Json environment_spec_to_json(const EnvironmentSpec &spec);
EnvironmentSpec environment_spec_from_json(const Json &doc);

Json trajectory_spec_to_json(const TrajectorySpec &spec);
TrajectorySpec trajectory_spec_from_json(const Json &doc);

Json neighborhood_params_to_json(const NeighborhoodParams &params);
NeighborhoodParams neighborhood_params_from_json(const Json &doc);

Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &doc);
ExperimentConfig load_experiment_config(const std::string &path);

// ---- CSI database ------------------------------------------------------

// One record per line: {"idx": int, "t": float|null, "pos": [x,y,z]|null,
// "re": [M floats], "im": [M floats]}. The sidecar at <path>.meta.json holds
// the generating config and seed for exact regeneration.
void write_csi_database(const std::string &path, const CsiDatabase &db, const Json &metadata);
CsiDatabase read_csi_database(const std::string &path);
std::string database_metadata_path(const std::string &db_path);

Json database_metadata(const ExperimentConfig &config, const CsiDatabase &db);

// ---- exports -----------------------------------------------------------

Json neighborhood_export(const NeighborhoodList &list, const NeighborhoodParams &params,
                         std::optional<std::size_t> query_index, const CVector *query_vector);

Json codebook_export(const Codebook &cb, const SolverReport &report,
                     std::span<const CVector> channels, double power_dbw);

// ---- helpers -----------------------------------------------------------

// Stable shortest-ish decimal rendering used by the CSV writer (%.12g).
std::string format_double(double value);

Json cvector_to_json(const CVector &v);
CVector cvector_from_json(const Json &doc);

} // namespace beamdb

#endif
