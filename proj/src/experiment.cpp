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

#include "beamdb/experiment.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "beamdb/errors.hpp"

namespace beamdb
{

namespace
{

constexpr std::uint64_t kTagTrajectory = 0x7e017ea1ULL;
constexpr std::uint64_t kTagQuery = 0x09e0b1e5ULL;
constexpr std::uint64_t kTagSolver = 0x50c95eedULL;

struct Query
{
    std::uint64_t seed = 0;
    Vec3 position;
    CVector channel;
};

struct TrialOutcome
{
    std::size_t sweep_index = 0;
    std::size_t trial = 0;
    std::size_t neighborhood_size = 0;
    double mms = 0.0, ebf = 0.0, mrt = 0.0;          // min-sum gains on the neighborhood
    double mms_at_query = 0.0, ebf_at_query = 0.0;   // realized gain on the query channel
    double mrt_at_query = 0.0;
    std::string error;
};

void evaluate_trial(const ExperimentConfig &config, const CsiDatabase &db, const Query &query,
                    std::size_t sweep_index, TrialOutcome &out)
{
    const double value = config.sweep.values[sweep_index];
    NeighborhoodParams params = config.neighborhood;
    std::size_t L = config.codebook_size;
    switch (config.sweep.axis)
    {
    case SweepAxis::Neighbors:
        params.mode = MatchMode::TopT;
        params.top_t = static_cast<std::size_t>(value);
        break;
    case SweepAxis::Threshold:
        params.mode = MatchMode::Threshold;
        params.gamma = value;
        break;
    case SweepAxis::CodebookSize:
        L = static_cast<std::size_t>(value);
        break;
    }
    const double power = config.power_watts();

    NeighborhoodList nb = build_neighborhood(db, query.channel, params);
    out.neighborhood_size = nb.size();

    out.mrt = mrt_baseline_gain(query.channel, power, L, nb.channels);
    Codebook ebf = ebf_codebook(nb.channels, power, L);
    out.ebf = min_sum_gain(ebf, nb.channels);

    SolverConfig solver = config.solver;
    solver.query = query.channel;
    solver.seed = derive_seed(config.seed, kTagSolver, sweep_index * 1000003ULL + out.trial);
    DesignResult mms = sca_design(nb.channels, power, L, solver);
    out.mms = mms.report.best_gain;

    const CVector query_only[] = {query.channel};
    out.mms_at_query = min_sum_gain(mms.codebook, query_only);
    out.ebf_at_query = min_sum_gain(ebf, query_only);
    out.mrt_at_query = min_sum_gain(mrt_codebook(query.channel, power, L), query_only);
}

double sample_mean(const std::vector<double> &xs)
{
    double acc = 0.0;
    for (double x : xs)
        acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_stderr(const std::vector<double> &xs, double mean)
{
    if (xs.size() < 2)
        return 0.0;
    double acc = 0.0;
    for (double x : xs)
        acc += (x - mean) * (x - mean);
    const double var = acc / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &config)
{
    config.validate();

    const Environment env = build_environment(config.env, config.seed);
    Rng traj_rng(derive_seed(config.seed, kTagTrajectory));
    const std::vector<Vec3> trajectory =
        generate_trajectory(config.trajectory, env.room, traj_rng);
    const CsiDatabase db = generate_database(trajectory, env);

    // one query per trial, shared across sweep values (matched trials)
    std::vector<Query> queries(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t)
    {
        queries[t].seed = derive_seed(config.seed, kTagQuery, t);
        Rng qrng(queries[t].seed);
        queries[t].position = sample_trajectory_point(config.trajectory, env.room, qrng);
        queries[t].channel = channel_at(env, queries[t].position);
    }

    const std::size_t n_tasks = config.sweep.values.size() * config.trials;
    std::vector<TrialOutcome> outcomes(n_tasks);

    auto run_task = [&](std::size_t task)
    {
        const std::size_t si = task / config.trials;
        const std::size_t trial = task % config.trials;
        TrialOutcome &out = outcomes[task];
        out.sweep_index = si;
        out.trial = trial;
        try
        {
            evaluate_trial(config, db, queries[trial], si, out);
        }
        catch (const std::exception &e)
        {
            out.error = e.what();
        }
    };

    std::size_t n_threads = config.threads != 0
                                ? config.threads
                                : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_tasks);
    if (n_threads <= 1)
    {
        for (std::size_t task = 0; task < n_tasks; ++task)
            run_task(task);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (std::size_t w = 0; w < n_threads; ++w)
            workers.emplace_back(
                [&]
                {
                    for (std::size_t task = next.fetch_add(1); task < n_tasks;
                         task = next.fetch_add(1))
                        run_task(task);
                });
        for (auto &w : workers)
            w.join();
    }

    SweepResult result;
    result.rows.reserve(n_tasks * 3);
    const char *schemes[3] = {"MMS", "EBF", "MRT"};
    for (const TrialOutcome &out : outcomes)
    {
        const double gains[3] = {out.mms, out.ebf, out.mrt};
        for (int s = 0; s < 3; ++s)
        {
            ResultRow row;
            row.sweep_value = config.sweep.values[out.sweep_index];
            row.scheme = schemes[s];
            row.trial = out.trial;
            row.seed = queries[out.trial].seed;
            row.neighborhood_size = out.neighborhood_size;
            if (out.error.empty())
            {
                row.gain_linear = gains[s];
                row.gain_db = to_db(gains[s]);
            }
            else
            {
                row.error = out.error;
            }
            result.rows.push_back(std::move(row));
        }
    }

    // per (sweep value, scheme) aggregates over successful trials, averaged in
    // linear scale and reported in dB
    for (std::size_t si = 0; si < config.sweep.values.size(); ++si)
        for (int s = 0; s < 3; ++s)
        {
            std::vector<double> xs;
            xs.reserve(config.trials);
            for (const TrialOutcome &out : outcomes)
                if (out.sweep_index == si && out.error.empty())
                    xs.push_back(s == 0 ? out.mms : (s == 1 ? out.ebf : out.mrt));
            if (xs.empty())
                continue;
            SweepSummaryRow sum;
            sum.sweep_value = config.sweep.values[si];
            sum.scheme = schemes[s];
            sum.samples = xs.size();
            sum.mean_linear = sample_mean(xs);
            sum.stderr_linear = sample_stderr(xs, sum.mean_linear);
            sum.mean_db = to_db(sum.mean_linear);
            result.summary.push_back(std::move(sum));
        }

    Json summary_json = Json::array();
    for (const SweepSummaryRow &s : result.summary)
        summary_json.push_back(Json{{"sweep_value", s.sweep_value},
                                    {"scheme", s.scheme},
                                    {"samples", s.samples},
                                    {"mean_linear", s.mean_linear},
                                    {"stderr_linear", s.stderr_linear},
                                    {"mean_db", s.mean_db}});
    Json trials_json = Json::array();
    for (const TrialOutcome &out : outcomes)
    {
        Json t{{"sweep_value", config.sweep.values[out.sweep_index]},
               {"trial", out.trial},
               {"query_seed", queries[out.trial].seed},
               {"query_position", Json::array({queries[out.trial].position.x,
                                               queries[out.trial].position.y,
                                               queries[out.trial].position.z})}};
        if (out.error.empty())
        {
            t["K"] = out.neighborhood_size;
            t["gain_at_query"] = Json{{"MMS", out.mms_at_query},
                                      {"EBF", out.ebf_at_query},
                                      {"MRT", out.mrt_at_query}};
        }
        else
        {
            t["error"] = out.error;
        }
        trials_json.push_back(std::move(t));
    }
    result.metadata = Json{
        {"format", "beamdb-sweep"},
        {"version", 1},
        {"config", experiment_config_to_json(config)},
        {"database_records", db.size()},
        {"antennas", db.dim()},
        {"averaging", "linear-scale means reported in dB"},
        {"summary", std::move(summary_json)},
        {"trials", std::move(trials_json)},
    };
    return result;
}

std::string sweep_csv(std::span<const ResultRow> rows)
{
    std::ostringstream out;
    out << "sweep_value,scheme,gain_db,K,trial,seed\n";
    for (const ResultRow &row : rows)
    {
        out << format_double(row.sweep_value) << ',' << row.scheme << ',';
        if (row.error.empty())
            out << format_double(row.gain_db);
        else
            out << "error";
        out << ',' << row.neighborhood_size << ',' << row.trial << ',' << row.seed << '\n';
    }
    return out.str();
}

GenerateResult run_generate(const ExperimentConfig &config)
{
    config.validate();
    const Environment env = build_environment(config.env, config.seed);
    Rng traj_rng(derive_seed(config.seed, kTagTrajectory));
    const std::vector<Vec3> trajectory =
        generate_trajectory(config.trajectory, env.room, traj_rng);
    GenerateResult result;
    result.db = generate_database(trajectory, env, config.sample_interval);
    result.metadata = database_metadata(config, result.db);
    return result;
}

DesignOutcome run_design(const CsiDatabase &db, const DesignRequest &request)
{
    db.validate();
    if (db.empty())
        throw ValidationError("design: database is empty");
    if (!request.query_index && !request.query_vector)
        throw ValidationError("design: provide a query index or a query vector");

    CVector query;
    if (request.query_index)
        query = db.at(*request.query_index).h;
    else
    {
        query = *request.query_vector;
        if (query.dim() != db.dim())
            throw ValidationError("design: query vector dimension does not match the database");
    }

    const double power = std::pow(10.0, request.power_dbw / 10.0);
    const std::size_t L = request.codebook_size;

    DesignOutcome out;
    out.neighborhood = build_neighborhood(db, query, request.params);

    out.mrt_gain = mrt_baseline_gain(query, power, L, out.neighborhood.channels);
    Codebook ebf = ebf_codebook(out.neighborhood.channels, power, L);
    out.ebf_gain = min_sum_gain(ebf, out.neighborhood.channels);

    SolverConfig solver = request.solver;
    solver.query = query;
    DesignResult design = sca_design(out.neighborhood.channels, power, L, solver);
    out.codebook = design.codebook;
    out.report = design.report;
    out.mms_gain = design.report.best_gain;

    if (solver.init == InitStrategy::BestBaseline &&
        out.mms_gain < std::max(out.ebf_gain, out.mrt_gain) - 1e-8)
        throw SolverError("design lost to its own baseline start; this indicates a solver bug");

    out.codebook_json = codebook_export(out.codebook, out.report, out.neighborhood.channels,
                                        request.power_dbw);
    Json comparison = Json::array();
    const struct
    {
        const char *name;
        double gain;
    } entries[] = {{"MMS", out.mms_gain}, {"EBF", out.ebf_gain}, {"MRT", out.mrt_gain}};
    for (const auto &e : entries)
        comparison.push_back(Json{{"scheme", e.name},
                                  {"gain_linear", e.gain},
                                  {"gain_db", to_db(e.gain)}});
    out.comparison_json = Json{
        {"K", out.neighborhood.size()},
        {"L", L},
        {"power_dbw", request.power_dbw},
        {"schemes", std::move(comparison)},
    };
    return out;
}

} // namespace beamdb
