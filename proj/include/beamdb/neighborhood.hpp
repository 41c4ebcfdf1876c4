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
// Two-stage neighborhood channel-list generation: closeness matching against
// the database followed by +-k chronological expansion with deduplication.

#ifndef BEAMDB_NEIGHBORHOOD_HPP
#define BEAMDB_NEIGHBORHOOD_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "beamdb/channel.hpp"
#include "beamdb/linalg.hpp"

namespace beamdb
{

// |g^H h|^2 / (||g||^2 ||h||^2), in [0, 1]. Scale and phase invariant.
double closeness(const CVector &g, const CVector &h);

enum class MatchMode
{
    Threshold, // keep entries with closeness strictly above gamma
    TopT       // keep the T entries with the largest closeness
};

struct NeighborhoodParams
{
    MatchMode mode = MatchMode::TopT;
    double gamma = 0.4;
    std::size_t top_t = 5;
    std::size_t k = 5;          // chronological half-width of the local expansion
    bool exclude_query = false; // omit the most recent record (the source of g-hat)

    void validate() const;
};

struct NeighborhoodList
{
    std::vector<std::size_t> member_indices;  // sorted, unique
    std::vector<CVector> channels;            // h_1..h_K in index order
    std::vector<std::size_t> initial_indices; // provenance: the matched entries

    std::size_t size() const { return member_indices.size(); }
};

// Initial matching stage. Threshold mode returns every index whose closeness
// to g exceeds gamma (chronological order); TopT returns the T best, ties
// broken toward the smaller index, reported in chronological order. An empty
// result is the explicit empty-match signal; the caller decides the fallback.
std::vector<std::size_t> match_initial(const CsiDatabase &db, const CVector &g,
                                       const NeighborhoodParams &params);

// Union of the windows {m-k .. m+k} over all initial indices, clipped at the
// database ends, deduplicated and sorted. Size is at most (2k+1)*|initial|.
NeighborhoodList expand_local(const CsiDatabase &db, std::span<const std::size_t> initial,
                              std::size_t k);

// match_initial followed by expand_local. Throws EmptyMatchError when the
// matching stage comes back empty.
NeighborhoodList build_neighborhood(const CsiDatabase &db, const CVector &g,
                                    const NeighborhoodParams &params);

} // namespace beamdb

#endif
