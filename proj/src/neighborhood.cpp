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

#include "beamdb/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamdb/errors.hpp"

namespace beamdb
{

double closeness(const CVector &g, const CVector &h)
{
    const double g2 = squared_norm(g);
    const double h2 = squared_norm(h);
    if (g2 <= 0.0 || h2 <= 0.0)
        throw ValidationError("closeness: zero-norm input");
    return std::norm(hermitian_inner(g, h)) / (g2 * h2);
}

void NeighborhoodParams::validate() const
{
    if (mode == MatchMode::Threshold && (!(gamma > 0.0) || gamma > 1.0))
        throw ValidationError("closeness threshold gamma must lie in (0, 1]");
    if (mode == MatchMode::TopT && top_t == 0)
        throw ValidationError("top-T selection needs T >= 1");
}

std::vector<std::size_t> match_initial(const CsiDatabase &db, const CVector &g,
                                       const NeighborhoodParams &params)
{
    params.validate();
    if (db.empty())
        throw ValidationError("match_initial: database is empty");
    if (g.dim() != db.dim())
        throw ValidationError("match_initial: query dimension does not match the database");

    // the most recent record is the source of the outdated CSI
    const std::size_t limit = (params.exclude_query && db.size() > 0) ? db.size() - 1 : db.size();

    std::vector<std::size_t> matched;
    if (params.mode == MatchMode::Threshold)
    {
        for (std::size_t i = 0; i < limit; ++i)
            if (closeness(g, db.records[i].h) > params.gamma)
                matched.push_back(i);
    }
    else
    {
        std::vector<std::pair<double, std::size_t>> scored;
        scored.reserve(limit);
        for (std::size_t i = 0; i < limit; ++i)
            scored.emplace_back(closeness(g, db.records[i].h), i);
        const std::size_t t = std::min<std::size_t>(params.top_t, scored.size());
        std::partial_sort(scored.begin(), scored.begin() + t, scored.end(),
                          [](const auto &a, const auto &b)
                          {
                              if (a.first != b.first)
                                  return a.first > b.first;
                              return a.second < b.second; // ties: smaller index wins
                          });
        matched.reserve(t);
        for (std::size_t i = 0; i < t; ++i)
            matched.push_back(scored[i].second);
        std::sort(matched.begin(), matched.end()); // chronological order
    }
    return matched;
}

NeighborhoodList expand_local(const CsiDatabase &db, std::span<const std::size_t> initial,
                              std::size_t k)
{
    if (initial.empty())
        throw ValidationError("expand_local: initial index list is empty");

    std::vector<std::size_t> members;
    members.reserve(initial.size() * (2 * k + 1));
    for (std::size_t m : initial)
    {
        if (m >= db.size())
            throw ValidationError("expand_local: index " + std::to_string(m) + " out of range");
        const std::size_t lo = (m >= k) ? m - k : 0; // clip at the ends, no wraparound
        const std::size_t hi = std::min(m + k, db.size() - 1);
        for (std::size_t i = lo; i <= hi; ++i)
            members.push_back(i);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    NeighborhoodList list;
    list.member_indices = std::move(members);
    list.initial_indices.assign(initial.begin(), initial.end());
    std::sort(list.initial_indices.begin(), list.initial_indices.end());
    list.channels.reserve(list.member_indices.size());
    for (std::size_t i : list.member_indices)
        list.channels.push_back(db.records[i].h);
    return list;
}

NeighborhoodList build_neighborhood(const CsiDatabase &db, const CVector &g,
                                    const NeighborhoodParams &params)
{
    std::vector<std::size_t> initial = match_initial(db, g, params);
    if (initial.empty())
        throw EmptyMatchError(
            "no database entry exceeds the closeness threshold; lower gamma or use top-T selection");
    return expand_local(db, initial, params.k);
}

} // namespace beamdb
