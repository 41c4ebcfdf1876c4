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

#include "beamdb/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "beamdb/errors.hpp"
#include "beamdb/neighborhood.hpp"
#include "beamdb/optimizer.hpp"
#include "beamdb/rng.hpp"

namespace beamdb
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CVector random_cvector(Rng &rng, std::size_t dim, double scale = 1.0)
{
    std::vector<Complex> e(dim);
    for (auto &c : e)
        c = scale * Complex(rng.normal(), rng.normal());
    return CVector(std::move(e));
}

std::vector<CVector> random_channels(Rng &rng, std::size_t count, std::size_t dim)
{
    std::vector<CVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_cvector(rng, dim, rng.uniform(0.25, 4.0)));
    return out;
}

} // namespace

CheckResult check_minorant_soundness(
    std::size_t samples, std::uint64_t seed,
    const std::function<double(const CVector &, const CVector &, const CVector &)> &minorant)
{
    const auto start = std::chrono::steady_clock::now();
    auto fn = minorant ? minorant
                       : [](const CVector &h, const CVector &f, const CVector &w)
        { return taylor_minorant(h, f, w); };

    Rng rng(derive_seed(seed, 0x0001ULL));
    double worst_excess = -1e300;  // minorant minus true value; must stay <= 1e-10
    double worst_tangency = 0.0;   // |minorant(w) - |h^H w|^2| relative at f = w
    for (std::size_t i = 0; i < samples; ++i)
    {
        const std::size_t m = 2 + (i % 15); // M in {2..16}
        const CVector h = random_cvector(rng, m);
        const CVector f = random_cvector(rng, m, rng.uniform(0.2, 2.0));
        const CVector w = random_cvector(rng, m, rng.uniform(0.2, 2.0));
        const double truth = std::norm(hermitian_inner(h, f));
        worst_excess = std::max(worst_excess, fn(h, f, w) - truth);

        const double at_w = std::norm(hermitian_inner(h, w));
        const double tangency = std::abs(fn(h, w, w) - at_w) / std::max(1.0, at_w);
        worst_tangency = std::max(worst_tangency, tangency);
    }

    CheckResult res;
    res.name = "minorant-soundness";
    res.pass = worst_excess <= 1e-10 && worst_tangency <= 1e-12;
    std::ostringstream msg;
    msg << samples << " triples, max excess " << worst_excess << ", max tangency gap "
        << worst_tangency;
    res.details = msg.str();
    res.seconds = seconds_since(start);
    return res;
}

CheckResult check_sca_ascent(std::size_t instances, std::uint64_t seed, double eps)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, 0x0002ULL));
    double worst_t_drop = 0.0;
    double worst_gain_drop = 0.0;
    std::size_t total_iterations = 0;

    for (std::size_t i = 0; i < instances; ++i)
    {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 15);  // 2..16
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 30);  // 1..30
        const std::size_t l = 1 + static_cast<std::size_t>(rng.uniform() * 3);   // 1..3
        const std::vector<CVector> channels = random_channels(rng, k, m);

        SolverConfig config;
        config.max_outer = 60;
        config.eps_outer = 1e-6;
        config.eps_inner = 1e-9;
        config.seed = rng.next_u64();
        if (i % 2 == 0)
        {
            config.init = InitStrategy::BestBaseline;
            config.query = random_cvector(rng, m);
        }
        else
        {
            config.init = InitStrategy::Random;
        }

        const DesignResult res = sca_design(channels, 1.0, std::min(l, m), config);
        total_iterations += res.report.iterations;
        for (std::size_t n = 1; n < res.report.t_trace.size(); ++n)
            worst_t_drop = std::max(worst_t_drop,
                                    res.report.t_trace[n - 1] - res.report.t_trace[n]);
        for (std::size_t n = 1; n < res.report.gain_trace.size(); ++n)
            worst_gain_drop = std::max(worst_gain_drop, res.report.gain_trace[n - 1] -
                                                            res.report.gain_trace[n]);
    }

    CheckResult res;
    res.name = "sca-ascent";
    res.pass = worst_t_drop <= eps && worst_gain_drop <= eps;
    std::ostringstream msg;
    msg << instances << " instances, " << total_iterations << " outer iterations, max t drop "
        << worst_t_drop << ", max gain drop " << worst_gain_drop << " (allowed " << eps << ")";
    res.details = msg.str();
    res.seconds = seconds_since(start);
    return res;
}

CheckResult check_exact_csi_k1(std::uint64_t seed)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, 0x0003ULL));
    bool pass = true;
    std::ostringstream msg;

    for (int trial = 0; trial < 5 && pass; ++trial)
    {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 15);
        const double power = (trial == 0) ? 2.0 : 1.0;
        const CVector h = random_cvector(rng, m);
        const std::vector<CVector> channels{h};

        for (std::size_t l : {std::size_t{1}, std::size_t{2}})
        {
            if (l > m)
                continue;
            SolverConfig config;
            config.init = InitStrategy::BestBaseline;
            config.query = h;
            const DesignResult mms = sca_design(channels, power, l, config);
            const double target = static_cast<double>(l) * power;
            if (std::abs(mms.report.best_gain - target) > 1e-6 * target)
            {
                pass = false;
                msg << "MMS gain " << mms.report.best_gain << " != L*P " << target;
                break;
            }
            for (const CVector &f : mms.codebook.vectors)
                if (closeness(f, h) < 0.999)
                {
                    pass = false;
                    msg << "MMS vector strays from the channel (closeness "
                        << closeness(f, h) << ")";
                    break;
                }
            if (l == 1 && pass)
            {
                const Codebook ebf = ebf_codebook(channels, power, 1);
                const double ebf_gain = min_sum_gain(ebf, channels);
                if (std::abs(ebf_gain - power) > 1e-6 * power ||
                    closeness(ebf.vectors[0], h) < 0.999)
                {
                    pass = false;
                    msg << "EBF does not reduce to MRT at K=1 (gain " << ebf_gain << ")";
                }
            }
        }
    }
    if (pass)
        msg << "K=1 collapses to MRT for L in {1,2} at P in {1,2}";

    CheckResult res;
    res.name = "exact-csi-k1";
    res.pass = pass;
    res.details = msg.str();
    res.seconds = seconds_since(start);
    return res;
}

CheckResult check_oracle_equivalence(std::size_t instances, std::uint64_t seed,
                                     std::size_t restarts)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, 0x0004ULL));
    double worst_ratio = 1.0;

    for (std::size_t i = 0; i < instances; ++i)
    {
        const std::size_t k = 2 + (i % 3); // K in {2, 3, 4}
        const std::vector<CVector> channels = random_channels(rng, k, 2);
        const double oracle = brute_force_oracle(channels, 1.0, 1, 512);

        SolverConfig config;
        config.init = InitStrategy::BestBaseline;
        config.restarts = restarts;
        config.seed = rng.next_u64();
        config.max_outer = 100;
        config.eps_outer = 1e-8;
        const DesignResult res = sca_design(channels, 1.0, 1, config);
        if (oracle > 0.0)
            worst_ratio = std::min(worst_ratio, res.report.best_gain / oracle);
    }

    CheckResult res;
    res.name = "oracle-equivalence";
    res.pass = worst_ratio >= 0.98;
    std::ostringstream msg;
    msg << instances << " M=2 instances, worst SCA/oracle ratio " << worst_ratio
        << " (needs >= 0.98)";
    res.details = msg.str();
    res.seconds = seconds_since(start);
    return res;
}

CheckResult check_nested_monotonicity(std::size_t pairs, std::uint64_t seed)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, 0x0005ULL));
    double worst_violation = 0.0;

    for (std::size_t i = 0; i < pairs; ++i)
    {
        const std::size_t k_small = 1 + (i % 3);
        const std::size_t extra = 1 + static_cast<std::size_t>(rng.uniform() * 3);
        std::vector<CVector> small_set = random_channels(rng, k_small, 2);
        std::vector<CVector> large_set = small_set;
        for (std::size_t j = 0; j < extra; ++j)
            large_set.push_back(random_cvector(rng, 2, rng.uniform(0.25, 4.0)));

        const double v_small = brute_force_oracle(small_set, 1.0, 1, 512);
        const double v_large = brute_force_oracle(large_set, 1.0, 1, 512);
        worst_violation = std::max(worst_violation, v_large - v_small);
    }

    CheckResult res;
    res.name = "nested-monotonicity";
    res.pass = worst_violation <= 1e-9;
    std::ostringstream msg;
    msg << pairs << " nested pairs, max oracle(S') - oracle(S) = " << worst_violation
        << " (allowed 1e-9)";
    res.details = msg.str();
    res.seconds = seconds_since(start);
    return res;
}

std::vector<CheckResult> run_verify_suite(std::uint64_t seed)
{
    return {
        check_minorant_soundness(10000, seed),
        check_sca_ascent(50, seed),
        check_exact_csi_k1(seed),
        check_oracle_equivalence(20, seed),
        check_nested_monotonicity(20, seed),
    };
}

} // namespace beamdb
