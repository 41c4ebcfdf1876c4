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

#include <cmath>

#include "beamdb/errors.hpp"
#include "beamdb/optimizer.hpp"
#include "beamdb/rng.hpp"
#include "beamdb/socp.hpp"

using namespace beamdb;

namespace
{

CVector random_cvector(Rng &rng, std::size_t dim, double scale = 1.0)
{
    std::vector<Complex> e(dim);
    for (auto &c : e)
        c = scale * Complex(rng.normal(), rng.normal());
    return CVector(std::move(e));
}

std::vector<CVector> scaled_to_power(std::vector<CVector> vecs, double p)
{
    for (auto &v : vecs)
        v *= Complex(std::sqrt(p / squared_norm(v)), 0.0);
    return vecs;
}

double anchor_value(std::span<const CVector> channels, std::span<const CVector> anchor)
{
    // min_k sum_l taylor_minorant(h_k, w_l, w_l) / ||h_k||^2 = min_sum_gain at w
    double worst = 1e300;
    for (const auto &h : channels)
    {
        double acc = 0.0;
        for (const auto &w : anchor)
            acc += taylor_minorant(h, w, w);
        worst = std::min(worst, acc / squared_norm(h));
    }
    return worst;
}

} // namespace

TEST_CASE("subproblem at the MRT anchor is already optimal")
{
    const CVector h{Complex(0.6, -0.2), Complex(0.1, 0.9), Complex(-0.4, 0.3)};
    const double p = 1.7;
    const std::vector<CVector> channels{h};
    const std::vector<CVector> anchor{mrt_beamformer(h, p)};

    SubproblemResult res = solve_subproblem(channels, anchor, p, 1e-9);
    CHECK(res.t == doctest::Approx(p).epsilon(1e-6));
    CHECK(res.diag.converged);
    CHECK(res.diag.duality_gap <= 1e-9);
    REQUIRE(res.vectors.size() == 1);
    CHECK(squared_norm(res.vectors[0]) <= p + 1e-9);
    // recovered beamformer aligns with MRT up to phase
    const double overlap =
        std::abs(hermitian_inner(res.vectors[0], anchor[0])) / (norm(res.vectors[0]) * norm(anchor[0]));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("hand-solved symmetric two-channel instance")
{
    // channels e1, e2; anchor (1,1)/sqrt(2); optimum t = 0.5 at f = anchor
    const std::vector<CVector> channels{CVector{1.0, 0.0}, CVector{0.0, 1.0}};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::vector<CVector> anchor{CVector{inv_sqrt2, inv_sqrt2}};

    SubproblemResult res = solve_subproblem(channels, anchor, 1.0, 1e-9);
    CHECK(res.t == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(res.vectors[0][0]) == doctest::Approx(inv_sqrt2).epsilon(1e-4));
    CHECK(std::abs(res.vectors[0][1]) == doctest::Approx(inv_sqrt2).epsilon(1e-4));
}

TEST_CASE("subproblem respects feasibility, the anchor bound and the power cap")
{
    Rng rng(123);
    for (int trial = 0; trial < 30; ++trial)
    {
        const std::size_t m = 2 + (trial % 7);
        const std::size_t l = 1 + (trial % 3);
        const std::size_t k = 1 + (trial % 9);
        const double p = rng.uniform(0.5, 3.0);

        std::vector<CVector> channels;
        for (std::size_t i = 0; i < k; ++i)
            channels.push_back(random_cvector(rng, m, rng.uniform(0.3, 3.0)));
        std::vector<CVector> anchor;
        for (std::size_t i = 0; i < l; ++i)
            anchor.push_back(random_cvector(rng, m));
        anchor = scaled_to_power(std::move(anchor), p * rng.uniform(0.2, 1.0));

        SubproblemResult res = solve_subproblem(channels, anchor, p, 1e-9);

        // power feasibility
        for (const auto &f : res.vectors)
            CHECK(squared_norm(f) <= p + 1e-9);

        // every linearized constraint holds at the returned point
        for (const auto &h : channels)
        {
            double acc = 0.0;
            for (std::size_t j = 0; j < l; ++j)
                acc += taylor_minorant(h, res.vectors[j], anchor[j]);
            CHECK(acc / squared_norm(h) >= res.t - 1e-7 - 1e-7 * std::abs(res.t));
        }

        // the anchor itself is feasible, so t >= value(anchor) - eps
        CHECK(res.t >= anchor_value(channels, anchor) - 1e-8);

        // physical cap: t never exceeds L * P
        CHECK(res.t <= static_cast<double>(l) * p + 1e-7);

        CHECK(res.diag.duality_gap <= 1e-9 * 1.0001);
    }
}

TEST_CASE("orthogonal channel forces t = 0")
{
    // anchor orthogonal to the only channel: the linearization pins t at 0
    const std::vector<CVector> channels{CVector{1.0, 0.0}};
    const std::vector<CVector> anchor{CVector{0.0, 1.0}};
    SubproblemResult res = solve_subproblem(channels, anchor, 1.0, 1e-9);
    CHECK(std::abs(res.t) <= 1e-8);
}

TEST_CASE("subproblem validates inputs")
{
    const std::vector<CVector> channels{CVector{1.0, 0.0}};
    const std::vector<CVector> anchor{CVector{1.0, 0.0}};
    const std::vector<CVector> hot_anchor{CVector{10.0, 0.0}};
    const std::vector<CVector> empty;

    CHECK_THROWS_AS(solve_subproblem(empty, anchor, 1.0, 1e-9), ValidationError);
    CHECK_THROWS_AS(solve_subproblem(channels, empty, 1.0, 1e-9), ValidationError);
    CHECK_THROWS_AS(solve_subproblem(channels, anchor, -1.0, 1e-9), ValidationError);
    CHECK_THROWS_AS(solve_subproblem(channels, hot_anchor, 1.0, 1e-9), ValidationError);

    const std::vector<CVector> zero_channel{CVector{0.0, 0.0}};
    CHECK_THROWS_AS(solve_subproblem(zero_channel, anchor, 1.0, 1e-9), ValidationError);
}

TEST_CASE("tight gap targets are achievable")
{
    Rng rng(99);
    const std::vector<CVector> channels{random_cvector(rng, 4), random_cvector(rng, 4),
                                        random_cvector(rng, 4)};
    std::vector<CVector> anchor{random_cvector(rng, 4)};
    anchor = scaled_to_power(std::move(anchor), 1.0);

    SubproblemResult loose = solve_subproblem(channels, anchor, 1.0, 1e-6);
    SubproblemResult tight = solve_subproblem(channels, anchor, 1.0, 1e-10);
    CHECK(tight.diag.duality_gap <= 1e-10 * 1.0001);
    // both solve the same convex problem
    CHECK(std::abs(loose.t - tight.t) <= 2e-6);
}
