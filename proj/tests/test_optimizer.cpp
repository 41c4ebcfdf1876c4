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
#include "beamdb/neighborhood.hpp"
#include "beamdb/optimizer.hpp"
#include "beamdb/rng.hpp"
#include "beamdb/selfcheck.hpp"

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

} // namespace

TEST_CASE("min_sum_gain on known configurations")
{
    const CVector h{Complex(0.3, 0.4), Complex(-0.8, 0.1)};
    const double p = 2.5;

    // aligned single-vector codebook attains P
    Codebook aligned({mrt_beamformer(h, p)}, p);
    const std::vector<CVector> channels{h};
    CHECK(min_sum_gain(aligned, channels) == doctest::Approx(p));

    // orthogonal beamformer scores zero
    Codebook ortho({CVector{Complex(0.0, 0.0), Complex(1.0, 0.0)}}, 1.0);
    const std::vector<CVector> e1{CVector{1.0, 0.0}};
    CHECK(min_sum_gain(ortho, e1) == doctest::Approx(0.0));

    // M=2, P=1, L=1, channels {e1, e2}, f = (1,1)/sqrt(2) -> 0.5
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Codebook diag({CVector{inv_sqrt2, inv_sqrt2}}, 1.0);
    const std::vector<CVector> basis{CVector{1.0, 0.0}, CVector{0.0, 1.0}};
    CHECK(min_sum_gain(diag, basis) == doctest::Approx(0.5));

    const std::vector<CVector> zero{CVector{0.0, 0.0}};
    CHECK_THROWS_AS(min_sum_gain(aligned, zero), ValidationError);
}

TEST_CASE("mrt beamformer")
{
    const CVector f = mrt_beamformer(CVector{1.0, 0.0}, 1.0);
    CHECK(f[0] == Complex(1.0, 0.0));
    CHECK(f[1] == Complex(0.0, 0.0));

    // g = (1, i), P = 4 -> (sqrt(2), sqrt(2) i)
    const CVector g{Complex(1.0, 0.0), Complex(0.0, 1.0)};
    const CVector f2 = mrt_beamformer(g, 4.0);
    CHECK(f2[0].real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(f2[1].imag() == doctest::Approx(std::sqrt(2.0)));
    CHECK(squared_norm(f2) == doctest::Approx(4.0));

    CHECK_THROWS_AS(mrt_beamformer(CVector{0.0, 0.0}, 1.0), ValidationError);
}

TEST_CASE("mrt baseline gain")
{
    const CVector g{1.0, 0.0};
    const std::vector<CVector> self{g};
    CHECK(mrt_baseline_gain(g, 1.5, 3, self) == doctest::Approx(4.5)); // L * P

    const std::vector<CVector> ortho{CVector{0.0, 1.0}};
    CHECK(mrt_baseline_gain(g, 1.0, 2, ortho) == doctest::Approx(0.0));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::vector<CVector> tilted{CVector{inv_sqrt2, inv_sqrt2}};
    CHECK(mrt_baseline_gain(g, 1.0, 2, tilted) == doctest::Approx(1.0)); // 2 * 1 * 0.5

    // the rule equals min_sum_gain of L copies of the MRT beamformer
    Rng rng(5);
    for (int i = 0; i < 20; ++i)
    {
        const std::size_t m = 2 + (i % 5);
        const CVector q = random_cvector(rng, m);
        std::vector<CVector> channels;
        for (int k = 0; k < 4; ++k)
            channels.push_back(random_cvector(rng, m, rng.uniform(0.5, 2.0)));
        const double direct = mrt_baseline_gain(q, 1.3, 2, channels);
        const double via_codebook = min_sum_gain(mrt_codebook(q, 1.3, 2), channels);
        CHECK(direct == doctest::Approx(via_codebook).epsilon(1e-12));
    }
}

TEST_CASE("ebf codebook")
{
    // K = 1: collinear with the channel, i.e. MRT up to phase
    const CVector h{Complex(0.5, 0.5), Complex(-0.3, 0.8)};
    const std::vector<CVector> single{h};
    Codebook cb = ebf_codebook(single, 2.0, 1);
    CHECK(closeness(cb.vectors[0], h) == doctest::Approx(1.0));
    CHECK(squared_norm(cb.vectors[0]) == doctest::Approx(2.0));

    // {e1, e1, e2}: dominant eigenvector is e1 (eigenvalues 2/3 vs 1/3)
    const std::vector<CVector> trio{CVector{1.0, 0.0}, CVector{1.0, 0.0}, CVector{0.0, 1.0}};
    Codebook cb2 = ebf_codebook(trio, 1.0, 1);
    CHECK(std::abs(cb2.vectors[0][0]) == doctest::Approx(1.0));

    // L = 2 vectors are orthogonal
    Rng rng(11);
    std::vector<CVector> channels;
    for (int i = 0; i < 6; ++i)
        channels.push_back(random_cvector(rng, 4));
    Codebook cb3 = ebf_codebook(channels, 1.5, 2);
    CHECK(std::abs(hermitian_inner(cb3.vectors[0], cb3.vectors[1])) <= 1e-8 * 1.5);

    CHECK_THROWS_AS(ebf_codebook(trio, 1.0, 3), ValidationError); // L > M

    // rank-deficient covariance: K = 1 with L = 2 pads the zero eigenspace
    // with an orthonormal completion
    Codebook cb4 = ebf_codebook(single, 1.0, 2);
    CHECK(closeness(cb4.vectors[0], h) == doctest::Approx(1.0));
    CHECK(std::abs(hermitian_inner(cb4.vectors[0], cb4.vectors[1])) <= 1e-8);
    CHECK(squared_norm(cb4.vectors[1]) == doctest::Approx(1.0));
}

TEST_CASE("taylor minorant basics")
{
    Rng rng(13);
    const CVector h = random_cvector(rng, 3);
    const CVector w = random_cvector(rng, 3);

    // tangency at f = w
    CHECK(taylor_minorant(h, w, w) ==
          doctest::Approx(std::norm(hermitian_inner(h, w))).epsilon(1e-12));

    // h orthogonal to w pins the minorant at zero
    const CVector e1{1.0, 0.0};
    const CVector e2{0.0, 1.0};
    const CVector f = random_cvector(rng, 2);
    CHECK(taylor_minorant(e1, f, e2) == doctest::Approx(0.0));

    // global bound over random triples
    for (int i = 0; i < 2000; ++i)
    {
        const std::size_t m = 2 + (i % 15);
        const CVector hh = random_cvector(rng, m);
        const CVector ff = random_cvector(rng, m, rng.uniform(0.2, 2.0));
        const CVector ww = random_cvector(rng, m, rng.uniform(0.2, 2.0));
        CHECK(taylor_minorant(hh, ff, ww) <=
              std::norm(hermitian_inner(hh, ff)) + 1e-10);
    }
}

TEST_CASE("sca on a single channel converges to MRT")
{
    Rng rng(17);
    const CVector h = random_cvector(rng, 6);
    const std::vector<CVector> channels{h};
    SolverConfig config;
    config.query = h;

    for (std::size_t l : {std::size_t{1}, std::size_t{2}})
    {
        DesignResult res = sca_design(channels, 1.0, l, config);
        CHECK(res.report.best_gain ==
              doctest::Approx(static_cast<double>(l)).epsilon(1e-6));
        for (const auto &f : res.codebook.vectors)
            CHECK(closeness(f, h) >= 0.999);
    }
}

TEST_CASE("sca from best baseline dominates both baselines")
{
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial)
    {
        const std::size_t m = 3 + (trial % 4);
        const std::size_t k = 2 + (trial % 6);
        const std::size_t l = 1 + (trial % 2);
        std::vector<CVector> channels;
        for (std::size_t i = 0; i < k; ++i)
            channels.push_back(random_cvector(rng, m, rng.uniform(0.4, 2.5)));
        const CVector query = random_cvector(rng, m);
        const double p = 1.0;

        SolverConfig config;
        config.query = query;
        DesignResult res = sca_design(channels, p, l, config);

        const double mrt = mrt_baseline_gain(query, p, l, channels);
        const double ebf = min_sum_gain(ebf_codebook(channels, p, l), channels);
        CHECK(res.report.best_gain >= std::max(mrt, ebf) - 1e-8);

        // feasibility of the returned codebook
        for (const auto &f : res.codebook.vectors)
            CHECK(squared_norm(f) <= p + 1e-9);

        // ascent of the epigraph trace
        for (std::size_t n = 1; n < res.report.t_trace.size(); ++n)
            CHECK(res.report.t_trace[n] >= res.report.t_trace[n - 1] - 1e-8);
    }
}

TEST_CASE("phase rotation of any channel leaves min_sum_gain unchanged")
{
    Rng rng(23);
    std::vector<CVector> channels;
    for (int i = 0; i < 5; ++i)
        channels.push_back(random_cvector(rng, 4));
    CVector f1 = random_cvector(rng, 4);
    CVector f2 = random_cvector(rng, 4);
    f1 *= Complex(0.8 / norm(f1), 0.0);
    f2 *= Complex(0.5 / norm(f2), 0.0);
    Codebook cb({f1, f2}, 1.0);

    const double base = min_sum_gain(cb, channels);
    for (int i = 0; i < 5; ++i)
    {
        std::vector<CVector> rotated = channels;
        rotated[i] *= std::polar(1.0, rng.uniform(0.0, 6.28));
        CHECK(min_sum_gain(cb, rotated) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("brute force oracle on known instances")
{
    const std::vector<CVector> e1{CVector{1.0, 0.0}};
    CHECK(brute_force_oracle(e1, 1.0) == doctest::Approx(1.0));

    const std::vector<CVector> basis{CVector{1.0, 0.0}, CVector{0.0, 1.0}};
    CHECK(brute_force_oracle(basis, 1.0) == doctest::Approx(0.5).epsilon(5e-3));

    // single channel: MRT optimality gives P for any h
    Rng rng(29);
    for (int i = 0; i < 5; ++i)
    {
        const std::vector<CVector> one{random_cvector(rng, 2)};
        CHECK(brute_force_oracle(one, 1.8) == doctest::Approx(1.8).epsilon(1e-4));
    }

    const std::vector<CVector> wrong_dim{random_cvector(rng, 3)};
    CHECK_THROWS_AS(brute_force_oracle(wrong_dim, 1.0), ValidationError);
    CHECK_THROWS_AS(brute_force_oracle(basis, 1.0, 2), ValidationError);
}

TEST_CASE("oracle grid is converged at the default resolution")
{
    Rng rng(31);
    for (int i = 0; i < 3; ++i)
    {
        std::vector<CVector> channels;
        for (int k = 0; k < 3; ++k)
            channels.push_back(random_cvector(rng, 2, rng.uniform(0.5, 2.0)));
        const double coarse = brute_force_oracle(channels, 1.0, 1, 256);
        const double fine = brute_force_oracle(channels, 1.0, 1, 512);
        CHECK(std::abs(fine - coarse) <= 5e-3 * std::max(fine, 1e-9));
    }
}

TEST_CASE("oracle nesting monotonicity")
{
    Rng rng(37);
    for (int i = 0; i < 8; ++i)
    {
        std::vector<CVector> small_set;
        for (int k = 0; k < 2; ++k)
            small_set.push_back(random_cvector(rng, 2));
        std::vector<CVector> large_set = small_set;
        large_set.push_back(random_cvector(rng, 2));
        CHECK(brute_force_oracle(large_set, 1.0) <= brute_force_oracle(small_set, 1.0) + 1e-9);
    }
}

TEST_CASE("minorant checker catches an injected sign error")
{
    // sanity for the verify suite itself: a mutated minorant must fail
    auto broken = [](const CVector &h, const CVector &f, const CVector &w)
    {
        const Complex hw = hermitian_inner(h, w);
        const Complex fh = hermitian_inner(f, h);
        return 2.0 * (fh * hw).real() + std::norm(hw); // sign flipped
    };
    CheckResult bad = check_minorant_soundness(500, 7, broken);
    CHECK_FALSE(bad.pass);

    CheckResult good = check_minorant_soundness(500, 7);
    CHECK(good.pass);
}

TEST_CASE("sca handles K larger than M")
{
    Rng rng(43);
    std::vector<CVector> channels;
    for (int i = 0; i < 12; ++i)
        channels.push_back(random_cvector(rng, 3));
    SolverConfig config;
    config.init = InitStrategy::Ebf;
    DesignResult res = sca_design(channels, 1.0, 2, config);
    CHECK(res.report.best_gain >= min_sum_gain(ebf_codebook(channels, 1.0, 2), channels) - 1e-8);
    CHECK(res.report.iterations >= 1);
}

TEST_CASE("codebook validates the power budget")
{
    CHECK_THROWS_AS(Codebook({CVector{2.0, 0.0}}, 1.0), ValidationError);
    CHECK_THROWS_AS(Codebook({}, 1.0), ValidationError);
    CHECK_THROWS_AS(Codebook({CVector{1.0}, CVector{1.0, 0.0}}, 2.0), ValidationError);
}
