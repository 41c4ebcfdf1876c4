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

#ifndef BEAMDB_ERRORS_HPP
#define BEAMDB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace beamdb
{

// Bad configuration or caller bug (dimension mismatch, invalid parameter, ...).
// Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument
{
  public:
    explicit ValidationError(const std::string &msg) : std::invalid_argument(msg) {}
};

// The neighborhood matching stage produced no candidates; callers should lower
// the threshold or switch to top-T selection.
class EmptyMatchError : public ValidationError
{
  public:
    explicit EmptyMatchError(const std::string &msg) : ValidationError(msg) {}
};

// Numeric failure inside an iterative solver (non-convergence, residual above
// contract). Maps to CLI exit code 2.
class SolverError : public std::runtime_error
{
  public:
    explicit SolverError(const std::string &msg, double residual = 0.0)
        : std::runtime_error(msg), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

// Filesystem / format failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error
{
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace beamdb

#endif
