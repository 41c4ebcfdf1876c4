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

#include "beamdb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "beamdb/errors.hpp"
#include "beamdb/neighborhood.hpp"
#include "beamdb/rng.hpp"

namespace beamdb
{

namespace
{

void check_channels(std::span<const CVector> channels)
{
    if (channels.empty())
        throw ValidationError("channel list must not be empty");
    const std::size_t m = channels[0].dim();
    for (const auto &h : channels)
    {
        if (h.dim() != m)
            throw ValidationError("channel dimensions differ");
        if (squared_norm(h) <= 0.0)
            throw ValidationError("zero-norm channel");
    }
}

} // namespace

Codebook::Codebook(std::vector<CVector> vecs, double p) : vectors(std::move(vecs)), power(p)
{
    if (vectors.empty())
        throw ValidationError("Codebook must hold at least one vector");
    if (!(power > 0.0))
        throw ValidationError("Codebook power budget must be positive");
    const std::size_t m = vectors[0].dim();
    for (const auto &f : vectors)
    {
        if (f.dim() != m)
            throw ValidationError("Codebook vectors have mixed dimensions");
        if (squared_norm(f) > power + 1e-9)
            throw ValidationError("Codebook vector violates the power budget");
    }
}

double min_sum_gain(const Codebook &cb, std::span<const CVector> channels)
{
    check_channels(channels);
    if (channels[0].dim() != cb.dim())
        throw ValidationError("min_sum_gain: channel/codebook dimension mismatch");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &h : channels)
    {
        double acc = 0.0;
        for (const auto &f : cb.vectors)
            acc += std::norm(hermitian_inner(h, f));
        worst = std::min(worst, acc / squared_norm(h));
    }
    return worst;
}

double to_db(double linear_gain) { return 10.0 * std::log10(linear_gain); }

CVector mrt_beamformer(const CVector &g, double power)
{
    const double n = norm(g);
    if (n <= 0.0)
        throw ValidationError("mrt_beamformer: zero vector");
    if (!(power > 0.0))
        throw ValidationError("mrt_beamformer: power must be positive");
    CVector f = g;
    f *= Complex(std::sqrt(power) / n, 0.0);
    return f;
}

Codebook mrt_codebook(const CVector &g, double power, std::size_t L)
{
    if (L == 0)
        throw ValidationError("mrt_codebook: L must be >= 1");
    std::vector<CVector> vecs(L, mrt_beamformer(g, power));
    return Codebook(std::move(vecs), power);
}

double mrt_baseline_gain(const CVector &g, double power, std::size_t L,
                         std::span<const CVector> channels)
{
    check_channels(channels);
    if (L == 0)
        throw ValidationError("mrt_baseline_gain: L must be >= 1");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &h : channels)
        worst = std::min(worst, closeness(g, h));
    return static_cast<double>(L) * power * worst;
}

Codebook ebf_codebook(std::span<const CVector> channels, double power, std::size_t L)
{
    check_channels(channels);
    if (L == 0)
        throw ValidationError("ebf_codebook: L must be >= 1");
    if (L > channels[0].dim())
        throw ValidationError("ebf_codebook: L exceeds the antenna count");
    HermitianMatrix cov = HermitianMatrix::covariance(channels);
    EigenPairs eig = dominant_eigenpairs(cov, L);
    std::vector<CVector> vecs;
    vecs.reserve(L);
    const double scale = std::sqrt(power);
    for (auto &u : eig.vectors)
    {
        u *= Complex(scale, 0.0);
        vecs.push_back(std::move(u));
    }
    return Codebook(std::move(vecs), power);
}

double taylor_minorant(const CVector &h, const CVector &f, const CVector &w)
{
    const Complex hw = hermitian_inner(h, w);
    const Complex fh = hermitian_inner(f, h);
    return 2.0 * (fh * hw).real() - std::norm(hw);
}

namespace
{

Codebook random_codebook(std::size_t M, std::size_t L, double power, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<CVector> vecs;
    vecs.reserve(L);
    for (std::size_t l = 0; l < L; ++l)
    {
        std::vector<Complex> e(M);
        double nrm2 = 0.0;
        do
        {
            nrm2 = 0.0;
            for (auto &c : e)
            {
                c = Complex(rng.normal(), rng.normal());
                nrm2 += std::norm(c);
            }
        } while (nrm2 < 1e-12);
        const double scale = std::sqrt(power / nrm2);
        for (auto &c : e)
            c *= scale;
        vecs.emplace_back(std::move(e));
    }
    return Codebook(std::move(vecs), power);
}

struct InitChoice
{
    Codebook cb;
    std::string label;
};

InitChoice make_initial(std::span<const CVector> channels, double power, std::size_t L,
                        const SolverConfig &config)
{
    switch (config.init)
    {
    case InitStrategy::Mrt:
        if (!config.query)
            throw ValidationError("MRT initialization requires a query vector");
        return {mrt_codebook(*config.query, power, L), "mrt"};
    case InitStrategy::Ebf:
        return {ebf_codebook(channels, power, L), "ebf"};
    case InitStrategy::BestBaseline:
    {
        Codebook ebf = ebf_codebook(channels, power, L);
        const double ebf_gain = min_sum_gain(ebf, channels);
        if (config.query)
        {
            Codebook mrt = mrt_codebook(*config.query, power, L);
            if (min_sum_gain(mrt, channels) > ebf_gain)
                return {std::move(mrt), "mrt"};
        }
        return {std::move(ebf), "ebf"};
    }
    case InitStrategy::Random:
        return {random_codebook(channels[0].dim(), L, power, config.seed), "random"};
    case InitStrategy::Given:
        if (!config.given)
            throw ValidationError("Given initialization requires a codebook");
        if (config.given->dim() != channels[0].dim() || config.given->size() != L)
            throw ValidationError("Given codebook does not match the problem shape");
        return {*config.given, "given"};
    }
    throw ValidationError("unknown initialization strategy");
}

DesignResult run_single_sca(std::span<const CVector> channels, double power,
                            const SolverConfig &config, InitChoice init)
{
    DesignResult out;
    out.report.init_label = init.label;

    Codebook current = std::move(init.cb);
    double init_gain = min_sum_gain(current, channels);
    out.report.t_trace.push_back(init_gain);
    out.report.gain_trace.push_back(init_gain);
    out.codebook = current;
    out.report.best_gain = init_gain;
    out.report.best_iteration = 0;

    double t_prev = init_gain;
    for (std::size_t n = 1; n <= config.max_outer; ++n)
    {
        SubproblemResult sub = solve_subproblem(channels, current.vectors, power, config.eps_inner);
        Codebook next(std::move(sub.vectors), power);
        const double gain = min_sum_gain(next, channels);

        out.report.t_trace.push_back(sub.t);
        out.report.gain_trace.push_back(gain);
        out.report.subproblem_diags.push_back(sub.diag);
        out.report.iterations = n;
        if (gain > out.report.best_gain)
        {
            out.report.best_gain = gain;
            out.report.best_iteration = n;
            out.codebook = next;
        }
        current = std::move(next);
        if (std::abs(sub.t - t_prev) <= config.eps_outer * std::max(1.0, std::abs(sub.t)))
        {
            out.report.converged = true;
            break;
        }
        t_prev = sub.t;
    }
    return out;
}

} // namespace

DesignResult sca_design(std::span<const CVector> channels, double power, std::size_t L,
                        const SolverConfig &config)
{
    check_channels(channels);
    if (L == 0)
        throw ValidationError("sca_design: L must be >= 1");
    if (!(power > 0.0))
        throw ValidationError("sca_design: power must be positive");
    if (config.max_outer == 0)
        throw ValidationError("sca_design: iteration cap must be >= 1");
    if (!(config.eps_outer > 0.0) || !(config.eps_inner > 0.0))
        throw ValidationError("sca_design: tolerances must be positive");
    if (config.query && config.query->dim() != channels[0].dim())
        throw ValidationError("sca_design: query dimension mismatch");

    std::optional<DesignResult> best;
    std::optional<SolverError> last_error;
    const std::size_t runs = 1 + config.restarts;
    for (std::size_t r = 0; r < runs; ++r)
    {
        InitChoice init =
            (r == 0) ? make_initial(channels, power, L, config)
                     : InitChoice{random_codebook(channels[0].dim(), L, power,
                                                  derive_seed(config.seed, 0x7357a7ULL, r)),
                                  "random-restart"};
        try
        {
            DesignResult res = run_single_sca(channels, power, config, std::move(init));
            if (!best || res.report.best_gain > best->report.best_gain)
                best = std::move(res);
        }
        catch (const SolverError &e)
        {
            last_error = e;
        }
    }
    if (!best)
        throw last_error.value_or(SolverError("sca_design: all restarts failed"));
    return std::move(*best);
}

double brute_force_oracle(std::span<const CVector> channels, double power,
                          std::size_t L, std::size_t resolution)
{
    check_channels(channels);
    if (L != 1)
        throw ValidationError("brute_force_oracle supports L = 1 only");
    if (channels[0].dim() != 2)
        throw ValidationError("brute_force_oracle supports M = 2 only");
    if (resolution < 2)
        throw ValidationError("brute_force_oracle: resolution must be >= 2");
    if (!(power > 0.0))
        throw ValidationError("brute_force_oracle: power must be positive");

    const std::size_t K = channels.size();
    std::vector<Complex> u0(K), u1(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const double n = norm(channels[k]);
        u0[k] = channels[k][0] / n;
        u1[k] = channels[k][1] / n;
    }

    std::vector<double> cos_phi(resolution), sin_phi(resolution);
    for (std::size_t j = 0; j < resolution; ++j)
    {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(resolution);
        cos_phi[j] = std::cos(phi);
        sin_phi[j] = std::sin(phi);
    }

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < resolution; ++i)
    {
        const double theta = 0.5 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(resolution - 1);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t j = 0; j < resolution; ++j)
        {
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < K; ++k)
            {
                // |u^H f|^2 with f = (c, s e^{j phi}); A = conj(u0) c, B = conj(u1) s
                const Complex a = std::conj(u0[k]) * c;
                const Complex b = std::conj(u1[k]) * s;
                const double g = std::norm(a) + std::norm(b) +
                                 2.0 * (a.real() * b.real() + a.imag() * b.imag()) * cos_phi[j] +
                                 2.0 * (a.imag() * b.real() - a.real() * b.imag()) * sin_phi[j];
                worst = std::min(worst, g);
                if (worst < best)
                    break;
            }
            best = std::max(best, worst);
        }
    }
    return power * best;
}

} // namespace beamdb
