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
#include "beamdb/linalg.hpp"
#include "beamdb/rng.hpp"

using namespace beamdb;

namespace
{

CVector random_cvector(Rng &rng, std::size_t dim)
{
    std::vector<Complex> e(dim);
    for (auto &c : e)
        c = Complex(rng.normal(), rng.normal());
    return CVector(std::move(e));
}

} // namespace

TEST_CASE("hermitian inner product on known values")
{
    CHECK(hermitian_inner(CVector{1.0, 0.0}, CVector{1.0, 0.0}) == Complex(1.0, 0.0));
    CHECK(hermitian_inner(CVector{1.0, 0.0}, CVector{0.0, 1.0}) == Complex(0.0, 0.0));

    // conj(1+i) * 2 = 2 - 2i
    const Complex v = hermitian_inner(CVector{Complex(1.0, 1.0), 0.0}, CVector{2.0, 0.0});
    CHECK(v.real() == doctest::Approx(2.0));
    CHECK(v.imag() == doctest::Approx(-2.0));

    CHECK_THROWS_AS(hermitian_inner(CVector{1.0}, CVector{1.0, 0.0}), ValidationError);
}

TEST_CASE("squared norm on known values")
{
    CHECK(squared_norm(CVector{1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(squared_norm(CVector{0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(squared_norm(CVector{3.0, Complex(0.0, 4.0)}) == doctest::Approx(25.0)); // 9 + 16
}

TEST_CASE("inner product properties on random vectors")
{
    Rng rng(7);
    for (int i = 0; i < 200; ++i)
    {
        const std::size_t dim = 1 + (i % 12);
        const CVector a = random_cvector(rng, dim);
        const CVector b = random_cvector(rng, dim);

        const Complex ab = hermitian_inner(a, b);
        const Complex ba = hermitian_inner(b, a);
        CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * (1.0 + std::abs(ab)));

        // Cauchy-Schwarz
        CHECK(std::norm(ab) <= squared_norm(a) * squared_norm(b) + 1e-12);

        // self inner product is real
        CHECK(std::abs(hermitian_inner(a, a).imag()) <= 1e-12 * (1.0 + squared_norm(a)));
    }
}

TEST_CASE("cvector construction validates entries")
{
    CHECK_THROWS_AS(CVector(std::vector<Complex>{}), ValidationError);
    std::vector<Complex> bad{Complex(1.0, std::nan(""))};
    CHECK_THROWS_AS(CVector(std::move(bad)), ValidationError);
    CHECK_THROWS_AS(CVector::zeros(0), ValidationError);
}

TEST_CASE("hermitian matrix rejects asymmetric input")
{
    CMatrix m(2, 2);
    m(0, 1) = Complex(1.0, 0.5);
    m(1, 0) = Complex(1.0, 0.5); // should be the conjugate
    CHECK_THROWS_AS(HermitianMatrix{m}, ValidationError);
}

TEST_CASE("dominant eigenvector of the identity")
{
    HermitianMatrix a(CMatrix::identity(2));
    EigenPairs eig = dominant_eigenpairs(a, 1);
    REQUIRE(eig.vectors.size() == 1);
    CHECK(eig.values[0] == doctest::Approx(1.0));
    CHECK(squared_norm(eig.vectors[0]) == doctest::Approx(1.0));
    // degenerate spectrum: any unit vector qualifies; the residual must vanish
    const CVector av = a.matrix().multiply(eig.vectors[0]);
    double res = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        res += std::norm(av[i] - eig.values[0] * eig.vectors[0][i]);
    CHECK(std::sqrt(res) <= 1e-10);
}

TEST_CASE("dominant eigenvector of diag(4, 1)")
{
    CMatrix m(2, 2);
    m(0, 0) = 4.0;
    m(1, 1) = 1.0;
    EigenPairs eig = dominant_eigenpairs(HermitianMatrix(m), 1);
    CHECK(eig.values[0] == doctest::Approx(4.0));
    CHECK(std::abs(eig.vectors[0][0]) == doctest::Approx(1.0)); // (1,0) up to phase
    CHECK(std::abs(eig.vectors[0][1]) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("rank-1 outer product returns its generator")
{
    const CVector h{Complex(1.0, 0.0), Complex(0.0, 1.0)};
    std::vector<CVector> vs{h};
    std::vector<double> ws{1.0};
    HermitianMatrix a = HermitianMatrix::from_outer_products(vs, ws);
    EigenPairs eig = dominant_eigenpairs(a, 1);
    CHECK(eig.values[0] == doctest::Approx(2.0)); // ||h||^2
    // alignment up to phase
    const double overlap = std::abs(hermitian_inner(eig.vectors[0], h)) / norm(h);
    CHECK(overlap == doctest::Approx(1.0));
}

TEST_CASE("eigensolver rejects L above the dimension")
{
    HermitianMatrix a(CMatrix::identity(3));
    CHECK_THROWS_AS(dominant_eigenpairs(a, 4), ValidationError);
    CHECK_THROWS_AS(dominant_eigenpairs(a, 0), ValidationError);
}

TEST_CASE("full eigendecomposition reconstructs random PSD matrices")
{
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial)
    {
        const std::size_t dim = 2 + (trial % 7); // up to 8
        const std::size_t terms = 1 + (trial % 8);
        std::vector<CVector> vs;
        std::vector<double> ws;
        for (std::size_t t = 0; t < terms; ++t)
        {
            vs.push_back(random_cvector(rng, dim));
            ws.push_back(rng.uniform(0.1, 2.0));
        }
        HermitianMatrix a = HermitianMatrix::from_outer_products(vs, ws);
        EigenPairs eig = dominant_eigenpairs(a, dim);

        // ordering and pairwise orthogonality
        for (std::size_t i = 1; i < dim; ++i)
            CHECK(eig.values[i] <= eig.values[i - 1] + 1e-9);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                CHECK(std::abs(hermitian_inner(eig.vectors[i], eig.vectors[j])) <= 1e-8);

        // sum of lambda u u^H reproduces A
        double err2 = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
            {
                Complex acc(0.0, 0.0);
                for (std::size_t l = 0; l < dim; ++l)
                    acc += eig.values[l] * eig.vectors[l][r] * std::conj(eig.vectors[l][c]);
                err2 += std::norm(acc - a(r, c));
            }
        CHECK(std::sqrt(err2) <= 1e-6 * std::max(1.0, a.matrix().frobenius_norm()));
    }
}

TEST_CASE("repeated eigenvalues compare as subspaces")
{
    // diag(2, 2, 1): the top eigenspace is the (e1, e2) plane
    CMatrix m(3, 3);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(2, 2) = 1.0;
    EigenPairs eig = dominant_eigenpairs(HermitianMatrix(m), 2);
    CHECK(eig.values[0] == doctest::Approx(2.0));
    CHECK(eig.values[1] == doctest::Approx(2.0));
    // projector onto span(u1, u2) must match diag(1, 1, 0)
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
        {
            Complex acc(0.0, 0.0);
            for (int l = 0; l < 2; ++l)
                acc += eig.vectors[l][r] * std::conj(eig.vectors[l][c]);
            const double want = (r == c && r < 2) ? 1.0 : 0.0;
            CHECK(std::abs(acc - want) <= 1e-8);
        }
}
