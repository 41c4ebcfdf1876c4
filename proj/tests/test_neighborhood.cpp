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

#include <algorithm>
#include <cmath>
#include <set>

#include "beamdb/errors.hpp"
#include "beamdb/neighborhood.hpp"
#include "beamdb/rng.hpp"

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

CsiDatabase make_db(const std::vector<CVector> &channels)
{
    CsiDatabase db;
    for (std::size_t i = 0; i < channels.size(); ++i)
    {
        CsiRecord rec;
        rec.index = static_cast<std::int64_t>(i);
        rec.h = channels[i];
        db.records.push_back(std::move(rec));
    }
    return db;
}

} // namespace

TEST_CASE("closeness on known pairs")
{
    const CVector g{Complex(0.3, -1.2), Complex(0.7, 0.1)};
    CHECK(closeness(g, g) == doctest::Approx(1.0));

    CHECK(closeness(CVector{1.0, 0.0}, CVector{0.0, 1.0}) == doctest::Approx(0.0));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(closeness(CVector{1.0, 0.0}, CVector{inv_sqrt2, inv_sqrt2}) == doctest::Approx(0.5));

    CHECK_THROWS_AS(closeness(CVector{0.0, 0.0}, g), ValidationError);
}

TEST_CASE("closeness is symmetric and scale invariant")
{
    Rng rng(3);
    for (int i = 0; i < 200; ++i)
    {
        const std::size_t dim = 2 + (i % 8);
        const CVector g = random_cvector(rng, dim);
        const CVector h = random_cvector(rng, dim);
        const double c = closeness(g, h);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
        CHECK(closeness(h, g) == doctest::Approx(c).epsilon(1e-12));

        CVector g2 = g;
        g2 *= std::polar(rng.uniform(0.1, 5.0), rng.uniform(0.0, 6.28));
        CVector h2 = h;
        h2 *= std::polar(rng.uniform(0.1, 5.0), rng.uniform(0.0, 6.28));
        CHECK(std::abs(closeness(g2, h2) - c) <= 1e-12);
    }
}

TEST_CASE("threshold matching")
{
    Rng rng(5);
    const CVector g = random_cvector(rng, 4);
    std::vector<CVector> channels{random_cvector(rng, 4), g, random_cvector(rng, 4)};
    CsiDatabase db = make_db(channels);

    NeighborhoodParams params;
    params.mode = MatchMode::Threshold;
    params.gamma = 0.99;
    auto matched = match_initial(db, g, params);
    REQUIRE(matched.size() >= 1);
    CHECK(std::find(matched.begin(), matched.end(), 1u) != matched.end());

    // strict inequality: gamma = 1 matches nothing without exact duplicates
    params.gamma = 1.0;
    std::vector<CVector> others{random_cvector(rng, 4), random_cvector(rng, 4)};
    CHECK(match_initial(make_db(others), g, params).empty());

    // monotone thresholding over a random database
    std::vector<CVector> many;
    for (int i = 0; i < 60; ++i)
        many.push_back(random_cvector(rng, 4));
    CsiDatabase big = make_db(many);
    std::size_t prev = many.size() + 1;
    for (double gamma : {0.2, 0.3, 0.4, 0.5, 0.6})
    {
        params.gamma = gamma;
        auto m = match_initial(big, g, params);
        std::set<std::size_t> cur(m.begin(), m.end());
        CHECK(m.size() <= prev);
        prev = m.size();
        // nesting: everything above a higher threshold is above a lower one
        params.gamma = gamma - 0.1;
        auto wider = match_initial(big, g, params);
        std::set<std::size_t> wide(wider.begin(), wider.end());
        for (std::size_t idx : cur)
            CHECK(wide.count(idx) == 1);
        params.gamma = gamma;
    }
}

TEST_CASE("top-T matching with deterministic tie-breaks")
{
    const CVector g{1.0, 0.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // closeness: 1.0, 0.5, 0.5, 0.0
    std::vector<CVector> channels{CVector{1.0, 0.0}, CVector{inv_sqrt2, inv_sqrt2},
                                  CVector{inv_sqrt2, Complex(0.0, inv_sqrt2)},
                                  CVector{0.0, 1.0}};
    CsiDatabase db = make_db(channels);

    NeighborhoodParams params;
    params.mode = MatchMode::TopT;
    params.top_t = 2;
    auto matched = match_initial(db, g, params);
    REQUIRE(matched.size() == 2);
    CHECK(matched[0] == 0);
    CHECK(matched[1] == 1); // tie at 0.5 broken toward the smaller index

    params.top_t = 10; // more than the database holds
    CHECK(match_initial(db, g, params).size() == 4);

    params.exclude_query = true;
    params.top_t = 4;
    auto excl = match_initial(db, g, params);
    CHECK(std::find(excl.begin(), excl.end(), 3u) == excl.end());
}

TEST_CASE("local expansion windows, clipping and dedup")
{
    Rng rng(8);
    std::vector<CVector> channels;
    for (int i = 0; i < 30; ++i)
        channels.push_back(random_cvector(rng, 2));
    CsiDatabase db = make_db(channels);

    // k = 0 keeps just the initial index
    std::vector<std::size_t> initial{7};
    NeighborhoodList single = expand_local(db, initial, 0);
    CHECK(single.member_indices == std::vector<std::size_t>{7});

    // three disjoint interior indices reach the 6k+3 bound
    std::vector<std::size_t> disjoint{5, 15, 25};
    const std::size_t k = 2;
    NeighborhoodList full = expand_local(db, disjoint, k);
    CHECK(full.size() == 6 * k + 3);

    // overlap case {m, m+1}, k=1 -> {m-1, m, m+1, m+2}
    std::vector<std::size_t> overlap{10, 11};
    NeighborhoodList merged = expand_local(db, overlap, 1);
    CHECK(merged.member_indices == std::vector<std::size_t>{9, 10, 11, 12});

    // boundary clipping
    std::vector<std::size_t> edge{0};
    NeighborhoodList clipped = expand_local(db, edge, 3);
    CHECK(clipped.member_indices == std::vector<std::size_t>{0, 1, 2, 3});

    std::vector<std::size_t> empty;
    CHECK_THROWS_AS(expand_local(db, empty, 1), ValidationError);
    std::vector<std::size_t> bad{99};
    CHECK_THROWS_AS(expand_local(db, bad, 1), ValidationError);
}

TEST_CASE("size bound holds with equality only for disjoint interior windows")
{
    Rng rng(13);
    std::vector<CVector> channels;
    for (int i = 0; i < 50; ++i)
        channels.push_back(random_cvector(rng, 2));
    CsiDatabase db = make_db(channels);

    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t k = static_cast<std::size_t>(rng.uniform() * 4);
        const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform() * 5);
        std::set<std::size_t> pick;
        while (pick.size() < t)
            pick.insert(static_cast<std::size_t>(rng.uniform() * 50));
        std::vector<std::size_t> initial(pick.begin(), pick.end());

        NeighborhoodList list = expand_local(db, initial, k);
        CHECK(list.size() <= (2 * k + 1) * t);

        bool disjoint_interior = true;
        for (std::size_t i = 0; i < initial.size(); ++i)
        {
            if (initial[i] < k || initial[i] + k >= 50)
                disjoint_interior = false;
            if (i > 0 && initial[i] - initial[i - 1] < 2 * k + 1)
                disjoint_interior = false;
        }
        CHECK((list.size() == (2 * k + 1) * t) == disjoint_interior);
    }
}

TEST_CASE("build_neighborhood end to end")
{
    Rng rng(21);
    const CVector g = random_cvector(rng, 3);
    std::vector<CVector> channels{g};
    CsiDatabase db = make_db(channels);

    NeighborhoodParams params;
    params.mode = MatchMode::Threshold;
    params.gamma = 0.5;
    params.k = 0;
    NeighborhoodList list = build_neighborhood(db, g, params);
    REQUIRE(list.size() == 1);
    CHECK(closeness(list.channels[0], g) == doctest::Approx(1.0));

    // growing k never removes members
    std::vector<CVector> many;
    for (int i = 0; i < 40; ++i)
    {
        CVector h = g;
        h *= std::polar(1.0, 0.05 * i);
        // drift away from g gradually
        CVector noise = random_cvector(rng, 3, 0.2 * i);
        h += noise;
        many.push_back(h);
    }
    CsiDatabase drift = make_db(many);
    params.gamma = 0.6;
    std::vector<std::size_t> prev;
    for (std::size_t k = 0; k < 6; ++k)
    {
        params.k = k;
        NeighborhoodList l = build_neighborhood(drift, g, params);
        for (std::size_t idx : prev)
            CHECK(std::find(l.member_indices.begin(), l.member_indices.end(), idx) !=
                  l.member_indices.end());
        prev = l.member_indices;
    }

    // empty match is an explicit error guiding the caller
    params.gamma = 1.0;
    params.k = 2;
    std::vector<CVector> far{random_cvector(rng, 3), random_cvector(rng, 3)};
    CHECK_THROWS_AS(build_neighborhood(make_db(far), g, params), EmptyMatchError);
}
