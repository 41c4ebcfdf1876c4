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

#include "beamdb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beamdb/errors.hpp"
#include "beamdb/rng.hpp"

namespace beamdb
{

namespace
{

void check_finite(const std::vector<Complex> &entries, const char *what)
{
    if (entries.empty())
        throw ValidationError(std::string(what) + " must have at least one entry");
    for (const auto &e : entries)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw ValidationError(std::string(what) + " contains a non-finite entry");
}

} // namespace

CVector::CVector(std::vector<Complex> entries) : entries_(std::move(entries))
{
    check_finite(entries_, "CVector");
}

CVector::CVector(std::initializer_list<Complex> entries) : entries_(entries)
{
    check_finite(entries_, "CVector");
}

CVector CVector::zeros(std::size_t dim)
{
    if (dim == 0)
        throw ValidationError("CVector dimension must be >= 1");
    CVector v;
    v.entries_.assign(dim, Complex(0.0, 0.0));
    return v;
}

CVector &CVector::operator*=(Complex scale)
{
    for (auto &e : entries_)
        e *= scale;
    return *this;
}

CVector &CVector::operator+=(const CVector &other)
{
    if (other.dim() != dim())
        throw ValidationError("CVector sum: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    return *this;
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0))
{
    if (rows == 0 || cols == 0)
        throw ValidationError("CMatrix dimensions must be positive");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (rows == 0 || cols == 0)
        throw ValidationError("CMatrix dimensions must be positive");
    if (entries_.size() != rows * cols)
        throw ValidationError("CMatrix entry count does not match rows*cols");
    for (const auto &e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw ValidationError("CMatrix contains a non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CVector CMatrix::multiply(const CVector &v) const
{
    if (v.dim() != cols_)
        throw ValidationError("CMatrix multiply: dimension mismatch");
    CVector out = CVector::zeros(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
    {
        Complex acc(0.0, 0.0);
        const Complex *row = entries_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c)
            acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

double CMatrix::frobenius_norm() const
{
    double acc = 0.0;
    for (const auto &e : entries_)
        acc += std::norm(e);
    return std::sqrt(acc);
}

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m))
{
    if (m_.rows() != m_.cols())
        throw ValidationError("HermitianMatrix must be square");
    for (std::size_t r = 0; r < m_.rows(); ++r)
        for (std::size_t c = r; c < m_.cols(); ++c)
        {
            Complex delta = m_(r, c) - std::conj(m_(c, r));
            if (std::abs(delta.real()) > 1e-12 || std::abs(delta.imag()) > 1e-12)
                throw ValidationError("matrix is not Hermitian within 1e-12");
        }
}

HermitianMatrix HermitianMatrix::covariance(std::span<const CVector> channels)
{
    if (channels.empty())
        throw ValidationError("covariance needs at least one vector");
    std::vector<double> weights(channels.size(), 1.0 / static_cast<double>(channels.size()));
    return from_outer_products(channels, weights);
}

HermitianMatrix HermitianMatrix::from_outer_products(std::span<const CVector> vectors,
                                                     std::span<const double> weights)
{
    if (vectors.empty() || vectors.size() != weights.size())
        throw ValidationError("from_outer_products: need matching non-empty vectors and weights");
    const std::size_t n = vectors[0].dim();
    CMatrix m(n, n);
    for (std::size_t i = 0; i < vectors.size(); ++i)
    {
        const CVector &h = vectors[i];
        if (h.dim() != n)
            throw ValidationError("from_outer_products: dimension mismatch");
        const double w = weights[i];
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r; c < n; ++c)
                m(r, c) += w * h[r] * std::conj(h[c]);
    }
    // mirror the strict upper triangle so hermiticity is exact
    for (std::size_t r = 0; r < n; ++r)
    {
        m(r, r) = Complex(m(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c)
            m(c, r) = std::conj(m(r, c));
    }
    HermitianMatrix out;
    out.m_ = std::move(m);
    return out;
}

Complex hermitian_inner(const CVector &a, const CVector &b)
{
    if (a.dim() != b.dim())
        throw ValidationError("hermitian_inner: dimension mismatch");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

double squared_norm(const CVector &a)
{
    if (a.dim() == 0)
        throw ValidationError("squared_norm of empty vector");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += std::norm(a[i]);
    return acc;
}

double norm(const CVector &a) { return std::sqrt(squared_norm(a)); }

namespace
{

// Remove the components of v along each u and renormalize. Returns false if v
// collapses to (numerical) zero.
bool orthonormalize(CVector &v, const std::vector<CVector> &us)
{
    for (int pass = 0; pass < 2; ++pass)
    {
        for (const auto &u : us)
        {
            Complex proj = hermitian_inner(u, v);
            for (std::size_t i = 0; i < v.dim(); ++i)
                v[i] -= proj * u[i];
        }
    }
    double n = norm(v);
    if (n < 1e-12)
        return false;
    v *= Complex(1.0 / n, 0.0);
    return true;
}

// Any unit vector orthogonal to the found eigenvectors; spans the zero
// eigenspace once the deflated matrix has vanished.
CVector orthogonal_complement_vector(std::size_t n, const std::vector<CVector> &us)
{
    for (std::size_t j = 0; j < n; ++j)
    {
        CVector v = CVector::zeros(n);
        v[j] = 1.0;
        if (orthonormalize(v, us))
            return v;
    }
    throw SolverError("eigensolver: failed to complete orthonormal basis");
}

} // namespace

EigenPairs dominant_eigenpairs(const HermitianMatrix &A, std::size_t L)
{
    const std::size_t n = A.dim();
    if (L == 0)
        throw ValidationError("dominant_eigenpairs: L must be >= 1");
    if (L > n)
        throw ValidationError("dominant_eigenpairs: L exceeds matrix dimension");

    const double norm_a = A.matrix().frobenius_norm();
    constexpr std::size_t kMaxIter = 10000;
    constexpr double kVecTol = 1e-10;

    // working copy that is deflated in place
    CMatrix work = A.matrix();
    EigenPairs out;
    Rng rng(0x5eedbeefULL); // fixed seed: deterministic starting vectors

    for (std::size_t l = 0; l < L; ++l)
    {
        CVector v = CVector::zeros(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = Complex(rng.normal(), rng.normal());
        if (!orthonormalize(v, out.vectors))
            v = orthogonal_complement_vector(n, out.vectors);

        double lambda = 0.0;
        double best_residual = std::numeric_limits<double>::infinity();
        bool converged = false;

        for (std::size_t it = 0; it < kMaxIter; ++it)
        {
            CVector w = work.multiply(v);
            double wn = norm(w);
            if (wn <= 1e-14 * std::max(norm_a, 1e-300))
            {
                // deflated matrix annihilates v: zero eigenvalue
                lambda = 0.0;
                converged = true;
                break;
            }
            lambda = hermitian_inner(v, w).real(); // Rayleigh quotient
            // residual ||A_work v - lambda v||
            double res2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                res2 += std::norm(w[i] - lambda * v[i]);
            best_residual = std::min(best_residual, std::sqrt(res2));

            CVector v_next = w;
            v_next *= Complex(1.0 / wn, 0.0);
            // keep numerically orthogonal to previously found eigenvectors
            if (!orthonormalize(v_next, out.vectors))
            {
                v = orthogonal_complement_vector(n, out.vectors);
                continue;
            }
            // phase-aligned change between iterates
            Complex overlap = hermitian_inner(v, v_next);
            Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
            double change2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                change2 += std::norm(v_next[i] - phase * v[i]);
            v = v_next;
            if (std::sqrt(change2) <= kVecTol || std::sqrt(res2) <= 1e-12 * std::max(norm_a, 1e-300))
            {
                lambda = hermitian_inner(v, work.multiply(v)).real();
                converged = true;
                break;
            }
        }
        if (!converged)
        {
            // accept anyway if the residual contract is already met
            CVector w = work.multiply(v);
            lambda = hermitian_inner(v, w).real();
        }

        // contract check against the original matrix
        CVector av = A.matrix().multiply(v);
        double res2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            res2 += std::norm(av[i] - lambda * v[i]);
        double residual = std::sqrt(res2);
        if (residual > 1e-8 * std::max(norm_a, 1e-300))
            throw SolverError("eigensolver: residual " + std::to_string(residual) +
                                  " exceeds 1e-8*||A|| after iteration cap",
                              residual);
        if (lambda < -1e-8 * std::max(norm_a, 1.0))
            throw SolverError("eigensolver: negative eigenvalue, matrix is not PSD");

        out.values.push_back(lambda);
        out.vectors.push_back(v);
        // deflate
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                work(r, c) -= lambda * v[r] * std::conj(v[c]);
    }

    // deflation yields non-increasing values up to roundoff; enforce the order
    for (std::size_t i = 1; i < out.values.size(); ++i)
        for (std::size_t j = i; j > 0 && out.values[j] > out.values[j - 1]; --j)
        {
            std::swap(out.values[j], out.values[j - 1]);
            std::swap(out.vectors[j], out.vectors[j - 1]);
        }
    return out;
}

std::vector<CVector> dominant_eigenvectors(const HermitianMatrix &A, std::size_t L)
{
    return dominant_eigenpairs(A, L).vectors;
}

} // namespace beamdb
