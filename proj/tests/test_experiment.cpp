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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>

#include "beamdb/errors.hpp"
#include "beamdb/experiment.hpp"

using namespace beamdb;

namespace
{

ExperimentConfig small_config()
{
    ExperimentConfig config;
    config.seed = 11;
    config.env.array.elements_u = 3;
    config.env.array.elements_v = 2; // M = 6
    config.env.scatterers.density_per_m3 = 2.0;
    config.trajectory.count = 60;
    config.trajectory.noise_std = 0.03;
    config.neighborhood.top_t = 3;
    config.neighborhood.k = 2;
    config.trials = 3;
    config.sweep.axis = SweepAxis::Neighbors;
    config.sweep.values = {1, 3};
    return config;
}

} // namespace

TEST_CASE("generate produces the requested database deterministically")
{
    ExperimentConfig config = small_config();
    GenerateResult a = run_generate(config);
    GenerateResult b = run_generate(config);
    REQUIRE(a.db.size() == 60);
    CHECK(a.db.dim() == 6);
    for (std::size_t i = 0; i < a.db.size(); ++i)
        for (std::size_t m = 0; m < a.db.dim(); ++m)
            CHECK(a.db.records[i].h[m] == b.db.records[i].h[m]);
    CHECK(a.metadata.at("records") == 60);

    config.trajectory.count = 0;
    CHECK_THROWS_AS(run_generate(config), ValidationError);
}

TEST_CASE("design on a database query dominates the baselines")
{
    ExperimentConfig config = small_config();
    GenerateResult gen = run_generate(config);

    DesignRequest request;
    request.query_index = gen.db.size() - 1; // most recent record
    request.params.top_t = 5;
    request.params.k = 5;
    request.codebook_size = 1;

    DesignOutcome outcome = run_design(gen.db, request);
    CHECK(outcome.neighborhood.size() >= 5);
    CHECK(outcome.mms_gain >= outcome.ebf_gain - 1e-8);
    CHECK(outcome.mms_gain >= outcome.mrt_gain - 1e-8);
    CHECK(outcome.comparison_json.at("schemes").size() == 3);

    // invalid index
    DesignRequest bad = request;
    bad.query_index = gen.db.size() + 5;
    CHECK_THROWS_AS(run_design(gen.db, bad), ValidationError);
}

TEST_CASE("design on a single-record database reports P for every scheme")
{
    ExperimentConfig config = small_config();
    config.trajectory.count = 1;
    GenerateResult gen = run_generate(config);
    REQUIRE(gen.db.size() == 1);

    DesignRequest request;
    request.query_index = 0;
    request.params.mode = MatchMode::Threshold;
    request.params.gamma = 0.5;
    request.params.k = 0;
    request.codebook_size = 1;
    request.power_dbw = 0.0; // P = 1 W, so 0 dB

    DesignOutcome outcome = run_design(gen.db, request);
    CHECK(outcome.mms_gain == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(outcome.ebf_gain == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(outcome.mrt_gain == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sweep emits one row per value, scheme and trial")
{
    ExperimentConfig config = small_config();
    SweepResult result = run_sweep(config);
    CHECK(result.rows.size() == 2 * 3 * 3);

    std::set<std::string> seen;
    for (const ResultRow &row : result.rows)
    {
        CHECK(row.error.empty());
        const std::string key = format_double(row.sweep_value) + "|" + row.scheme + "|" +
                                std::to_string(row.trial);
        CHECK(seen.insert(key).second); // exactly once
    }

    // baseline dominance on every trial
    std::map<std::string, double> gains;
    for (const ResultRow &row : result.rows)
        gains[format_double(row.sweep_value) + "|" + row.scheme + "|" +
              std::to_string(row.trial)] = row.gain_linear;
    for (const auto &[key, gain] : gains)
    {
        if (key.find("|MMS|") == std::string::npos)
            continue;
        std::string ebf_key = key, mrt_key = key;
        ebf_key.replace(key.find("|MMS|"), 5, "|EBF|");
        mrt_key.replace(key.find("|MMS|"), 5, "|MRT|");
        CHECK(gain >= gains.at(ebf_key) - 1e-8);
        CHECK(gain >= gains.at(mrt_key) - 1e-8);
    }

    // summary rows exist for every (value, scheme)
    CHECK(result.summary.size() == 2 * 3);
    CHECK(result.metadata.at("summary").size() == 6);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts")
{
    ExperimentConfig config = small_config();
    config.threads = 1;
    SweepResult serial = run_sweep(config);
    config.threads = 4;
    SweepResult parallel = run_sweep(config);
    SweepResult repeat = run_sweep(config);

    const std::string csv1 = sweep_csv(serial.rows);
    const std::string csv2 = sweep_csv(parallel.rows);
    const std::string csv3 = sweep_csv(repeat.rows);
    CHECK(csv1 == csv2);
    CHECK(csv2 == csv3);
    CHECK(serial.metadata.dump() == parallel.metadata.dump());
}

TEST_CASE("matched trials share queries across sweep values")
{
    ExperimentConfig config = small_config();
    SweepResult result = run_sweep(config);
    // per-trial seeds repeat for every sweep value
    std::map<std::size_t, std::set<std::uint64_t>> seeds;
    for (const ResultRow &row : result.rows)
        seeds[row.trial].insert(row.seed);
    for (const auto &[trial, s] : seeds)
        CHECK(s.size() == 1);
}

TEST_CASE("nested sweep values keep per-trial MMS gains monotone")
{
    // top-T initial lists nest as T grows, so each trial's max-min gain can
    // only shrink (up to solver tolerance)
    ExperimentConfig config = small_config();
    config.trials = 4;
    config.sweep.values = {1, 3, 5};
    SweepResult result = run_sweep(config);

    std::map<std::size_t, std::map<double, double>> mms;
    for (const ResultRow &row : result.rows)
        if (row.scheme == "MMS" && row.error.empty())
            mms[row.trial][row.sweep_value] = row.gain_linear;
    for (const auto &[trial, by_value] : mms)
    {
        double prev = 1e300;
        for (const auto &[value, gain] : by_value)
        {
            CHECK(gain <= prev + 1e-6);
            prev = gain;
        }
    }
}

TEST_CASE("unreachable thresholds are recorded as error rows")
{
    ExperimentConfig config = small_config();
    config.sweep.axis = SweepAxis::Threshold;
    config.sweep.values = {0.5, 1.0}; // 1.0 cannot be exceeded strictly
    SweepResult result = run_sweep(config);

    std::size_t errors = 0;
    for (const ResultRow &row : result.rows)
    {
        if (row.sweep_value == 1.0)
        {
            CHECK_FALSE(row.error.empty());
            ++errors;
        }
    }
    CHECK(errors == 3 * 3); // every scheme and trial at the impossible value

    const std::string csv = sweep_csv(result.rows);
    CHECK(csv.find(",error,") != std::string::npos);
    CHECK(csv.rfind("sweep_value,scheme,gain_db,K,trial,seed\n", 0) == 0);
}

TEST_CASE("codebook-size sweeps adjust L per value")
{
    ExperimentConfig config = small_config();
    config.sweep.axis = SweepAxis::CodebookSize;
    config.sweep.values = {1, 2};
    config.trials = 2;
    SweepResult result = run_sweep(config);

    // with more vectors the summed gain cannot drop for MRT (exactly L*P*c)
    std::map<std::size_t, std::map<double, double>> mrt;
    for (const ResultRow &row : result.rows)
        if (row.scheme == "MRT" && row.error.empty())
            mrt[row.trial][row.sweep_value] = row.gain_linear;
    for (const auto &[trial, by_value] : mrt)
        CHECK(by_value.at(2.0) == doctest::Approx(2.0 * by_value.at(1.0)));
}
