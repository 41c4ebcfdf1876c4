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

#ifndef BEAMDB_LINALG_HPP
#define BEAMDB_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace beamdb
{

using Complex = std::complex<double>;

// Complex column vector. Construction validates that every entry is finite
// and that the vector is non-empty; downstream code relies on both.
class CVector
{
  public:
    CVector() = default; // empty sentinel, dim() == 0
    explicit CVector(std::vector<Complex> entries);
    CVector(std::initializer_list<Complex> entries);

    static CVector zeros(std::size_t dim);

    std::size_t dim() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    Complex &operator[](std::size_t i) { return entries_[i]; }
    const Complex &operator[](std::size_t i) const { return entries_[i]; }

    const std::vector<Complex> &entries() const { return entries_; }

    CVector &operator*=(Complex scale);
    CVector &operator+=(const CVector &other);

  private:
    std::vector<Complex> entries_;
};

// Dense row-major complex matrix.
class CMatrix
{
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    CVector multiply(const CVector &v) const;
    double frobenius_norm() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> entries_;
};

// Square matrix checked to equal its conjugate transpose (1e-12 per entry).
class HermitianMatrix
{
  public:
    explicit HermitianMatrix(CMatrix m);

    // (1/count) * sum_i h_i h_i^H; Hermitian by construction.
    static HermitianMatrix covariance(std::span<const CVector> channels);
    // sum_i w_i h_i h_i^H without normalization.
    static HermitianMatrix from_outer_products(std::span<const CVector> vectors,
                                               std::span<const double> weights);

    std::size_t dim() const { return m_.rows(); }
    const CMatrix &matrix() const { return m_; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    HermitianMatrix() = default;
    CMatrix m_;
};

Complex hermitian_inner(const CVector &a, const CVector &b); // sum_j conj(a_j) b_j
double squared_norm(const CVector &a);
double norm(const CVector &a);

struct EigenPairs
{
    std::vector<double> values;   // non-increasing
    std::vector<CVector> vectors; // unit norm, mutually orthogonal
};

// Dominant eigenpairs of a PSD Hermitian matrix via power iteration with
// deflation (cap 10000 iterations, 1e-10 stop on eigenvector change).
// Residual contract: ||A u - lambda u|| <= 1e-8 * ||A||_F for every pair.
EigenPairs dominant_eigenpairs(const HermitianMatrix &A, std::size_t L);
std::vector<CVector> dominant_eigenvectors(const HermitianMatrix &A, std::size_t L);

} // namespace beamdb

#endif
