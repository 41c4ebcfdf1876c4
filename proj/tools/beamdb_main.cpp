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
// CLI front-end. Subcommands: generate, neighborhood, design, sweep, verify.
// Exit codes: 0 success, 1 validation, 2 solver failure, 3 I/O.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamdb/errors.hpp"
#include "beamdb/experiment.hpp"
#include "beamdb/io.hpp"
#include "beamdb/selfcheck.hpp"

namespace
{

using namespace beamdb;

struct CommonFlags
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::optional<std::size_t> codebook_size;
    std::optional<double> power_dbw;
    std::optional<std::string> traj_kind;
    std::optional<std::size_t> traj_count;
    std::optional<double> traj_noise;
    std::optional<double> traj_radius;
    std::optional<double> carrier_ghz;
    std::optional<double> reflection_gain_db;
    std::vector<std::size_t> array_elements;
    std::optional<std::string> sweep_axis;
    std::vector<double> sweep_values;
    std::vector<double> sweep_angles_deg;
    std::optional<double> sample_interval_s;
    // neighborhood
    std::optional<std::string> mode;
    std::optional<double> gamma;
    std::optional<double> max_angle_deg;
    std::optional<std::string> angle_map;
    std::optional<std::size_t> top_t;
    std::optional<std::size_t> k_local;
    bool exclude_query = false;
};

void add_common_flags(CLI::App *cmd, CommonFlags &flags)
{
    cmd->add_option("--config", flags.config_path,
                    "JSON config file; overrides the individual flags below");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--trials", flags.trials, "trials per sweep point");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--codebook-size,-L", flags.codebook_size, "beamforming vectors per codebook");
    cmd->add_option("--power-dbw", flags.power_dbw, "per-vector power budget in dBW");
    cmd->add_option("--traj-kind", flags.traj_kind, "circular | zigzag");
    cmd->add_option("--traj-count", flags.traj_count, "database points along the trajectory");
    cmd->add_option("--traj-noise-std", flags.traj_noise, "positional jitter std in meters");
    cmd->add_option("--traj-radius", flags.traj_radius, "circular trajectory radius in meters");
    cmd->add_option("--carrier-ghz", flags.carrier_ghz, "carrier frequency in GHz");
    cmd->add_option("--reflection-gain-db", flags.reflection_gain_db,
                    "per-reflection gain in dB");
    cmd->add_option("--array-elements", flags.array_elements,
                    "URA elements as <n_u> <n_v>")
        ->expected(2);
    cmd->add_option("--sweep-axis", flags.sweep_axis, "neighbors | threshold | codebook_size");
    cmd->add_option("--sweep-values", flags.sweep_values, "sweep values (ascending)");
    cmd->add_option("--sweep-angles-deg", flags.sweep_angles_deg,
                    "threshold sweep given as maximum angles in degrees");
    cmd->add_option("--sample-interval-s", flags.sample_interval_s,
                    "record timestamps spaced this many seconds apart");
    cmd->add_option("--mode", flags.mode, "neighborhood matching: threshold | top_t");
    cmd->add_option("--gamma", flags.gamma, "closeness threshold in (0, 1]");
    cmd->add_option("--max-angle-deg", flags.max_angle_deg,
                    "threshold given as a maximum angle (degrees)");
    cmd->add_option("--angle-map", flags.angle_map, "cos2 (default) or cos angle mapping");
    cmd->add_option("--top-t,-T", flags.top_t, "initial neighborhood list size");
    cmd->add_option("--k-local,-k", flags.k_local, "local expansion half-width k");
    cmd->add_flag("--exclude-query", flags.exclude_query,
                  "omit the most recent record from matching");
}

NeighborhoodParams neighborhood_from_flags(const CommonFlags &flags, NeighborhoodParams params)
{
    if (flags.mode)
    {
        if (*flags.mode == "threshold")
            params.mode = MatchMode::Threshold;
        else if (*flags.mode == "top_t")
            params.mode = MatchMode::TopT;
        else
            throw ValidationError("--mode must be threshold or top_t");
    }
    if (flags.gamma)
    {
        params.gamma = *flags.gamma;
        if (!flags.mode)
            params.mode = MatchMode::Threshold;
    }
    if (flags.max_angle_deg)
    {
        Json doc = neighborhood_params_to_json(params);
        doc["max_angle_deg"] = *flags.max_angle_deg;
        if (flags.angle_map)
            doc["angle_map"] = *flags.angle_map;
        params = neighborhood_params_from_json(doc);
        if (!flags.mode)
            params.mode = MatchMode::Threshold;
    }
    if (flags.top_t)
    {
        params.top_t = *flags.top_t;
        if (!flags.mode && !flags.gamma && !flags.max_angle_deg)
            params.mode = MatchMode::TopT;
    }
    if (flags.k_local)
        params.k = *flags.k_local;
    if (flags.exclude_query)
        params.exclude_query = true;
    params.validate();
    return params;
}

ExperimentConfig config_from_flags(const CommonFlags &flags)
{
    if (!flags.config_path.empty())
        return load_experiment_config(flags.config_path); // config file wins

    ExperimentConfig config;
    if (flags.seed)
        config.seed = *flags.seed;
    if (flags.trials)
        config.trials = *flags.trials;
    if (flags.threads)
        config.threads = *flags.threads;
    if (flags.codebook_size)
        config.codebook_size = *flags.codebook_size;
    if (flags.power_dbw)
        config.power_dbw = *flags.power_dbw;
    if (flags.traj_kind)
    {
        if (*flags.traj_kind == "circular")
            config.trajectory.kind = TrajectoryKind::Circular;
        else if (*flags.traj_kind == "zigzag")
        {
            config.trajectory.kind = TrajectoryKind::Zigzag;
            config.trajectory.count = 2000;
        }
        else
            throw ValidationError("--traj-kind must be circular or zigzag");
    }
    if (flags.traj_count)
        config.trajectory.count = *flags.traj_count;
    if (flags.traj_noise)
        config.trajectory.noise_std = *flags.traj_noise;
    if (flags.traj_radius)
        config.trajectory.radius = *flags.traj_radius;
    if (flags.carrier_ghz)
        config.env.array.carrier_hz = *flags.carrier_ghz * 1e9;
    if (flags.reflection_gain_db)
        config.env.reflection_gain_db = *flags.reflection_gain_db;
    if (!flags.array_elements.empty())
    {
        config.env.array.elements_u = flags.array_elements[0];
        config.env.array.elements_v = flags.array_elements[1];
    }
    if (flags.sweep_axis)
    {
        if (*flags.sweep_axis == "neighbors")
            config.sweep.axis = SweepAxis::Neighbors;
        else if (*flags.sweep_axis == "threshold")
            config.sweep.axis = SweepAxis::Threshold;
        else if (*flags.sweep_axis == "codebook_size")
            config.sweep.axis = SweepAxis::CodebookSize;
        else
            throw ValidationError("--sweep-axis must be neighbors, threshold or codebook_size");
    }
    if (!flags.sweep_values.empty())
        config.sweep.values = flags.sweep_values;
    if (!flags.sweep_angles_deg.empty())
    {
        Json sweep_doc{{"axis", "threshold"}, {"angle_values_deg", flags.sweep_angles_deg}};
        if (flags.angle_map)
            sweep_doc["angle_map"] = *flags.angle_map;
        Json doc = experiment_config_to_json(config);
        doc["sweep"] = sweep_doc;
        config = experiment_config_from_json(doc);
    }
    if (flags.sample_interval_s)
        config.sample_interval = *flags.sample_interval_s;
    config.neighborhood = neighborhood_from_flags(flags, config.neighborhood);
    config.validate();
    return config;
}

void write_text_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << content;
    if (!out)
        throw IoError("write failed for " + path);
}

CVector load_query_vector(const std::string &path)
{
    return cvector_from_json(read_json_file(path));
}

int cmd_generate(const CommonFlags &flags, const std::string &out_path)
{
    ExperimentConfig config = config_from_flags(flags);
    if (flags.seed && !flags.config_path.empty())
        config.seed = *flags.seed; // allow reseeding a stored config
    GenerateResult result = run_generate(config);
    write_csi_database(out_path, result.db, result.metadata);
    std::cout << "wrote " << result.db.size() << " records (" << result.db.dim()
              << " antennas) to " << out_path << "\n"
              << "metadata: " << database_metadata_path(out_path) << "\n";
    return 0;
}

int cmd_neighborhood(const CommonFlags &flags, const std::string &db_path,
                     std::optional<std::size_t> query_index, const std::string &query_file,
                     const std::string &out_path)
{
    CsiDatabase db = read_csi_database(db_path);
    NeighborhoodParams params = neighborhood_from_flags(flags, NeighborhoodParams{});
    if (!flags.config_path.empty())
        params = load_experiment_config(flags.config_path).neighborhood;

    CVector query;
    if (query_index)
        query = db.at(*query_index).h;
    else if (!query_file.empty())
        query = load_query_vector(query_file);
    else
        throw ValidationError("neighborhood: provide --query-index or --query-file");

    NeighborhoodList list = build_neighborhood(db, query, params);
    Json doc = neighborhood_export(list, params, query_index,
                                   query_index ? nullptr : &query);
    if (out_path.empty())
        std::cout << doc.dump(2) << "\n";
    else
    {
        write_json_file(out_path, doc);
        std::cout << "neighborhood of " << list.size() << " channels written to " << out_path
                  << "\n";
    }
    return 0;
}

int cmd_design(const CommonFlags &flags, const std::string &db_path,
               std::optional<std::size_t> query_index, const std::string &query_file,
               const std::string &out_path, std::optional<std::size_t> restarts)
{
    CsiDatabase db = read_csi_database(db_path);

    DesignRequest request;
    request.params = neighborhood_from_flags(flags, NeighborhoodParams{});
    if (!flags.config_path.empty())
    {
        ExperimentConfig config = load_experiment_config(flags.config_path);
        request.params = config.neighborhood;
        request.solver = config.solver;
        request.codebook_size = config.codebook_size;
        request.power_dbw = config.power_dbw;
    }
    if (flags.codebook_size)
        request.codebook_size = *flags.codebook_size;
    if (flags.power_dbw)
        request.power_dbw = *flags.power_dbw;
    if (restarts)
        request.solver.restarts = *restarts;
    request.query_index = query_index;
    if (!query_file.empty())
        request.query_vector = load_query_vector(query_file);

    DesignOutcome outcome = run_design(db, request);

    std::cout << "neighborhood size K = " << outcome.neighborhood.size() << "\n";
    std::cout << "scheme  gain(dB)\n";
    for (const auto &entry : outcome.comparison_json.at("schemes"))
        std::cout << entry.at("scheme").get<std::string>() << "     "
                  << format_double(entry.at("gain_db").get<double>()) << "\n";
    if (!out_path.empty())
    {
        Json doc = outcome.codebook_json;
        doc["comparison"] = outcome.comparison_json;
        write_json_file(out_path, doc);
        std::cout << "codebook written to " << out_path << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonFlags &flags, const std::string &csv_path,
              const std::string &meta_path)
{
    ExperimentConfig config = config_from_flags(flags);
    if (!flags.config_path.empty())
    {
        // flags that make sense to tweak per run even with a stored config
        if (flags.seed)
            config.seed = *flags.seed;
        if (flags.threads)
            config.threads = *flags.threads;
    }
    SweepResult result = run_sweep(config);
    const std::string csv = sweep_csv(result.rows);
    if (csv_path.empty())
        std::cout << csv;
    else
    {
        write_text_file(csv_path, csv);
        std::cout << "wrote " << result.rows.size() << " rows to " << csv_path << "\n";
    }
    if (!meta_path.empty())
    {
        write_json_file(meta_path, result.metadata);
        std::cout << "metadata: " << meta_path << "\n";
    }
    return 0;
}

int cmd_verify(std::uint64_t seed)
{
    std::vector<CheckResult> checks = run_verify_suite(seed);
    Json doc;
    doc["checks"] = Json::array();
    bool all_pass = true;
    for (const CheckResult &c : checks)
    {
        doc["checks"].push_back(Json{{"name", c.name},
                                     {"pass", c.pass},
                                     {"details", c.details},
                                     {"seconds", c.seconds}});
        all_pass = all_pass && c.pass;
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " - " << c.details << "\n";
    }
    doc["all_pass"] = all_pass;
    std::cout << doc.dump(2) << "\n";
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamdb - robust beamforming codebooks from a historical CSI database"};
    app.require_subcommand(1);

    CommonFlags gen_flags, nb_flags, design_flags, sweep_flags;
    std::string gen_out = "database.jsonl";
    std::string nb_db, nb_query_file, nb_out;
    std::optional<std::size_t> nb_query_index;
    std::string design_db, design_query_file, design_out;
    std::optional<std::size_t> design_query_index, design_restarts;
    std::string sweep_csv_path, sweep_meta_path;
    std::uint64_t verify_seed = 2024;

    CLI::App *generate = app.add_subcommand("generate", "synthesize a CSI database");
    add_common_flags(generate, gen_flags);
    generate->add_option("--out,-o", gen_out, "output JSON-lines database path");

    CLI::App *neighborhood =
        app.add_subcommand("neighborhood", "build and export a neighborhood channel list");
    add_common_flags(neighborhood, nb_flags);
    neighborhood->add_option("--database,-d", nb_db, "CSI database path")->required();
    neighborhood->add_option("--query-index", nb_query_index, "database index of the query");
    neighborhood->add_option("--query-file", nb_query_file, "JSON file with re/im arrays");
    neighborhood->add_option("--out,-o", nb_out, "output JSON path (stdout when omitted)");

    CLI::App *design = app.add_subcommand("design", "design a codebook for one query");
    add_common_flags(design, design_flags);
    design->add_option("--database,-d", design_db, "CSI database path")->required();
    design->add_option("--query-index", design_query_index, "database index of the query");
    design->add_option("--query-file", design_query_file, "JSON file with re/im arrays");
    design->add_option("--restarts", design_restarts, "extra random-start SCA runs");
    design->add_option("--out,-o", design_out, "output codebook JSON path");

    CLI::App *sweep = app.add_subcommand("sweep", "run a full experiment sweep");
    add_common_flags(sweep, sweep_flags);
    sweep->add_option("--out-csv", sweep_csv_path, "CSV output path (stdout when omitted)");
    sweep->add_option("--out-meta", sweep_meta_path, "JSON metadata output path");

    CLI::App *verify = app.add_subcommand("verify", "run the built-in property/oracle suite");
    verify->add_option("--seed", verify_seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (generate->parsed())
            return cmd_generate(gen_flags, gen_out);
        if (neighborhood->parsed())
            return cmd_neighborhood(nb_flags, nb_db, nb_query_index, nb_query_file, nb_out);
        if (design->parsed())
            return cmd_design(design_flags, design_db, design_query_index, design_query_file,
                              design_out, design_restarts);
        if (sweep->parsed())
            return cmd_sweep(sweep_flags, sweep_csv_path, sweep_meta_path);
        if (verify->parsed())
            return cmd_verify(verify_seed);
    }
    catch (const IoError &e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    }
    catch (const ValidationError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const SolverError &e)
    {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
