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

#include "beamdb/socp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "beamdb/errors.hpp"

namespace beamdb
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

bool trace_enabled()
{
    static const bool on = std::getenv("BEAMDB_SOCP_TRACE") != nullptr;
    return on;
}

// y = H x for a lower-triangle-stored symmetric matrix.
void symmetric_multiply(const std::vector<double> &h, std::size_t n,
                        const std::vector<double> &x, std::vector<double> &y)
{
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double *row = h.data() + i * n;
        double acc = row[i] * x[i];
        for (std::size_t j = 0; j < i; ++j)
        {
            acc += row[j] * x[j];
            y[j] += row[j] * x[i];
        }
        y[i] += acc;
    }
}

// Dense symmetric positive definite solve (lower-triangle Cholesky, row major)
// with symmetric Jacobi scaling. The barrier Hessian is PD in exact arithmetic
// but its diagonal spans many orders of magnitude near the boundary; scaling
// keeps the factorization accurate there. A ridge retry covers pivot collapse.
class CholeskySolver
{
  public:
    explicit CholeskySolver(std::size_t n) : n_(n), l_(n * n, 0.0), scale_(n, 1.0) {}

    bool factor(const std::vector<double> &h)
    {
        for (std::size_t i = 0; i < n_; ++i)
        {
            const double d = h[i * n_ + i];
            scale_[i] = (d > 0.0 && std::isfinite(d)) ? 1.0 / std::sqrt(d) : 1.0;
        }
        double ridge = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt)
        {
            if (try_factor(h, ridge))
                return true;
            ridge = (ridge == 0.0) ? 1e-14 : ridge * 1e3; // on the unit-diagonal scaled matrix
        }
        return false;
    }

    // solves H x = b via the scaled factorization
    void solve(const std::vector<double> &b, std::vector<double> &x) const
    {
        x.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            x[i] = b[i] * scale_[i];
        for (std::size_t i = 0; i < n_; ++i)
        {
            double acc = x[i];
            const double *row = l_.data() + i * n_;
            for (std::size_t j = 0; j < i; ++j)
                acc -= row[j] * x[j];
            x[i] = acc / row[i];
        }
        for (std::size_t ii = n_; ii-- > 0;)
        {
            double acc = x[ii];
            for (std::size_t j = ii + 1; j < n_; ++j)
                acc -= l_[j * n_ + ii] * x[j];
            x[ii] = acc / l_[ii * n_ + ii];
        }
        for (std::size_t i = 0; i < n_; ++i)
            x[i] *= scale_[i];
    }

  private:
    bool try_factor(const std::vector<double> &h, double ridge)
    {
        for (std::size_t i = 0; i < n_; ++i)
        {
            for (std::size_t j = 0; j <= i; ++j)
            {
                double acc = h[i * n_ + j] * scale_[i] * scale_[j] + (i == j ? ridge : 0.0);
                const double *ri = l_.data() + i * n_;
                const double *rj = l_.data() + j * n_;
                for (std::size_t p = 0; p < j; ++p)
                    acc -= ri[p] * rj[p];
                if (i == j)
                {
                    if (acc <= 0.0 || !std::isfinite(acc))
                        return false;
                    l_[i * n_ + i] = std::sqrt(acc);
                }
                else
                {
                    l_[i * n_ + j] = acc / l_[j * n_ + j];
                }
            }
        }
        return true;
    }

    std::size_t n_;
    std::vector<double> l_;
    std::vector<double> scale_;
};

// Normalized problem data:
//   maximize t  s.t.  rho_k . z >= b_k  (rho has -1 on the t coordinate),
//                     ||x_l|| <= 1 per codebook slot.
// z = (x_1, ..., x_L, t) with x_l the stacked Re/Im parts of f_l / sqrt(P).
struct BarrierProblem
{
    std::size_t M = 0, L = 0, K = 0;
    std::size_t n = 0; // 2*M*L + 1
    std::vector<std::vector<double>> rho;
    std::vector<double> b;

    std::size_t t_index() const { return n - 1; }
    std::size_t block(std::size_t l) const { return 2 * M * l; }

    double linear_slack(std::size_t k, const std::vector<double> &z) const
    {
        const auto &r = rho[k];
        double acc = -b[k];
        for (std::size_t i = 0; i < n; ++i)
            acc += r[i] * z[i];
        return acc;
    }

    double ball_gap(std::size_t l, const std::vector<double> &z) const
    {
        double nrm2 = 0.0;
        const double *x = z.data() + block(l);
        for (std::size_t j = 0; j < 2 * M; ++j)
            nrm2 += x[j] * x[j];
        return 1.0 - nrm2;
    }
};

struct BarrierState
{
    std::vector<double> z;
    std::vector<double> slack; // K linear slacks
    std::vector<double> qgap;  // L ball gaps
};

void refresh_slacks(const BarrierProblem &prob, BarrierState &st)
{
    st.slack.resize(prob.K);
    st.qgap.resize(prob.L);
    for (std::size_t k = 0; k < prob.K; ++k)
        st.slack[k] = prob.linear_slack(k, st.z);
    for (std::size_t l = 0; l < prob.L; ++l)
        st.qgap[l] = prob.ball_gap(l, st.z);
}

double barrier_value(const BarrierProblem &prob, const BarrierState &st, double tau)
{
    double val = -tau * st.z[prob.t_index()];
    for (double s : st.slack)
    {
        if (s <= 0.0)
            return kInf;
        val -= std::log(s);
    }
    for (double q : st.qgap)
    {
        if (q <= 0.0)
            return kInf;
        val -= std::log(q);
    }
    return val;
}

void barrier_gradient(const BarrierProblem &prob, const BarrierState &st, double tau,
                      std::vector<double> &grad)
{
    const std::size_t n = prob.n;
    grad.assign(n, 0.0);
    grad[prob.t_index()] = -tau;
    for (std::size_t k = 0; k < prob.K; ++k)
    {
        const double w = 1.0 / st.slack[k];
        const auto &r = prob.rho[k];
        for (std::size_t i = 0; i < n; ++i)
            grad[i] -= w * r[i];
    }
    for (std::size_t l = 0; l < prob.L; ++l)
    {
        const double w = 2.0 / st.qgap[l];
        const std::size_t base = prob.block(l);
        for (std::size_t j = 0; j < 2 * prob.M; ++j)
            grad[base + j] += w * st.z[base + j];
    }
}

// Lower triangle of the barrier Hessian, row major.
void barrier_hessian(const BarrierProblem &prob, const BarrierState &st,
                     std::vector<double> &hess)
{
    const std::size_t n = prob.n;
    hess.assign(n * n, 0.0);
    for (std::size_t k = 0; k < prob.K; ++k)
    {
        const double w = 1.0 / (st.slack[k] * st.slack[k]);
        const auto &r = prob.rho[k];
        for (std::size_t i = 0; i < n; ++i)
        {
            const double wri = w * r[i];
            if (wri == 0.0)
                continue;
            double *row = hess.data() + i * n;
            for (std::size_t j = 0; j <= i; ++j)
                row[j] += wri * r[j];
        }
    }
    for (std::size_t l = 0; l < prob.L; ++l)
    {
        const double q = st.qgap[l];
        const double w1 = 2.0 / q;
        const double w2 = 4.0 / (q * q);
        const std::size_t base = prob.block(l);
        for (std::size_t i = 0; i < 2 * prob.M; ++i)
        {
            const std::size_t gi = base + i;
            double *row = hess.data() + gi * n;
            row[gi] += w1;
            const double wxi = w2 * st.z[gi];
            for (std::size_t j = 0; j <= i; ++j)
                row[base + j] += wxi * st.z[base + j];
        }
    }
}

// Largest step keeping every slack strictly positive.
double max_feasible_step(const BarrierProblem &prob, const BarrierState &st,
                         const std::vector<double> &dz)
{
    double alpha = kInf;
    for (std::size_t k = 0; k < prob.K; ++k)
    {
        const auto &r = prob.rho[k];
        double ds = 0.0;
        for (std::size_t i = 0; i < prob.n; ++i)
            ds += r[i] * dz[i];
        if (ds < 0.0)
            alpha = std::min(alpha, -st.slack[k] / ds);
    }
    for (std::size_t l = 0; l < prob.L; ++l)
    {
        const std::size_t base = prob.block(l);
        double a = 0.0, bb = 0.0;
        for (std::size_t j = 0; j < 2 * prob.M; ++j)
        {
            a += dz[base + j] * dz[base + j];
            bb += 2.0 * st.z[base + j] * dz[base + j];
        }
        const double q = st.qgap[l];
        if (a > 0.0)
        {
            const double disc = bb * bb + 4.0 * a * q;
            alpha = std::min(alpha, (-bb + std::sqrt(disc)) / (2.0 * a));
        }
        else if (bb > 0.0)
        {
            alpha = std::min(alpha, q / bb);
        }
    }
    return alpha;
}

struct CenterOutcome
{
    double decrement2 = kInf; // squared Newton decrement at exit
    std::size_t steps = 0;
    bool stalled = false;
};

CenterOutcome center(const BarrierProblem &prob, BarrierState &st, double tau,
                     CholeskySolver &chol, std::vector<double> &grad,
                     std::vector<double> &hess, std::vector<double> &dz)
{
    constexpr std::size_t kMaxNewton = 80;
    constexpr double kDecTol = 1e-10; // on squared decrement

    CenterOutcome out;
    double prev_dec2 = kInf;
    for (std::size_t it = 0; it < kMaxNewton; ++it)
    {
        barrier_gradient(prob, st, tau, grad);
        barrier_hessian(prob, st, hess);
        if (!chol.factor(hess))
        {
            out.stalled = true;
            return out;
        }
        std::vector<double> neg_grad(grad.size());
        for (std::size_t i = 0; i < grad.size(); ++i)
            neg_grad[i] = -grad[i];
        chol.solve(neg_grad, dz);

        // one pass of iterative refinement; the Hessian is ill-conditioned
        // whenever a cluster of nearly parallel constraints is almost active
        {
            std::vector<double> hdz, corr;
            symmetric_multiply(hess, prob.n, dz, hdz);
            std::vector<double> resid(grad.size());
            for (std::size_t i = 0; i < grad.size(); ++i)
                resid[i] = neg_grad[i] - hdz[i];
            chol.solve(resid, corr);
            for (std::size_t i = 0; i < grad.size(); ++i)
                dz[i] += corr[i];
        }

        double dec2 = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i)
            dec2 -= grad[i] * dz[i];
        out.decrement2 = std::max(dec2, 0.0);
        ++out.steps;
        if (!(dec2 > kDecTol))
            return out; // centered (also exits on NaN)
        // rounding noise floor: once the decrement is small and no longer
        // shrinking, the point is as centered as doubles allow
        if (dec2 < 1e-4 && dec2 > 0.25 * prev_dec2)
            return out;
        prev_dec2 = dec2;

        const double alpha_max = max_feasible_step(prob, st, dz);
        double alpha = std::min(1.0, 0.99 * alpha_max);
        const double f0 = barrier_value(prob, st, tau);
        BarrierState trial = st;
        bool moved = false;
        double f1 = kInf;
        while (alpha > 1e-16)
        {
            for (std::size_t i = 0; i < st.z.size(); ++i)
                trial.z[i] = st.z[i] + alpha * dz[i];
            refresh_slacks(prob, trial);
            f1 = barrier_value(prob, trial, tau);
            if (f1 <= f0 - 0.25 * alpha * dec2)
            {
                st = trial;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (trace_enabled())
            std::fprintf(stderr, "    newton it=%zu dec2=%.3e amax=%.3e a=%.3e f0=%.9e df=%.3e\n",
                         it, dec2, alpha_max, moved ? alpha : 0.0, f0, moved ? f0 - f1 : 0.0);
        if (!moved)
        {
            out.stalled = true;
            return out;
        }
    }
    out.stalled = true;
    return out;
}

} // namespace

SubproblemResult solve_subproblem(std::span<const CVector> channels,
                                  std::span<const CVector> anchor,
                                  double power,
                                  double eps_inner)
{
    if (channels.empty())
        throw ValidationError("solve_subproblem: empty channel list");
    if (anchor.empty())
        throw ValidationError("solve_subproblem: empty anchor codebook");
    if (!(power > 0.0))
        throw ValidationError("solve_subproblem: power budget must be positive");
    if (!(eps_inner > 0.0))
        throw ValidationError("solve_subproblem: eps_inner must be positive");

    const std::size_t M = anchor[0].dim();
    const std::size_t L = anchor.size();
    const std::size_t K = channels.size();
    const double sqrt_p = std::sqrt(power);

    for (const auto &w : anchor)
    {
        if (w.dim() != M)
            throw ValidationError("solve_subproblem: anchor dimensions differ");
        if (squared_norm(w) > power * (1.0 + 1e-6) + 1e-9)
            throw ValidationError("solve_subproblem: anchor violates the power budget");
    }

    BarrierProblem prob;
    prob.M = M;
    prob.L = L;
    prob.K = K;
    prob.n = 2 * M * L + 1;

    // Normalized anchors omega_l = w_l / sqrt(P), unit channels u_k.
    std::vector<std::vector<double>> omega(L, std::vector<double>(2 * M, 0.0));
    double max_omega_norm = 0.0;
    for (std::size_t l = 0; l < L; ++l)
    {
        double nrm2 = 0.0;
        for (std::size_t j = 0; j < M; ++j)
        {
            const Complex w = anchor[l][j] / sqrt_p;
            omega[l][2 * j] = w.real();
            omega[l][2 * j + 1] = w.imag();
            nrm2 += std::norm(w);
        }
        max_omega_norm = std::max(max_omega_norm, std::sqrt(nrm2));
    }

    prob.rho.assign(K, std::vector<double>(prob.n, 0.0));
    prob.b.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
    {
        const CVector &h = channels[k];
        if (h.dim() != M)
            throw ValidationError("solve_subproblem: channel dimension mismatch");
        const double hn = norm(h);
        if (hn <= 0.0)
            throw ValidationError("solve_subproblem: zero-norm channel");
        auto &r = prob.rho[k];
        for (std::size_t l = 0; l < L; ++l)
        {
            // alpha = u_k^H omega_l, linear coefficient block 2*emb(u_k * alpha)
            Complex alpha(0.0, 0.0);
            for (std::size_t j = 0; j < M; ++j)
                alpha += std::conj(h[j] / hn) * Complex(omega[l][2 * j], omega[l][2 * j + 1]);
            prob.b[k] += std::norm(alpha);
            const std::size_t base = prob.block(l);
            for (std::size_t j = 0; j < M; ++j)
            {
                const Complex c = (h[j] / hn) * alpha;
                r[base + 2 * j] = 2.0 * c.real();
                r[base + 2 * j + 1] = 2.0 * c.imag();
            }
        }
        r[prob.t_index()] = -1.0;
    }

    // Strictly interior start: shrunk anchor, epigraph value below its slacks.
    BarrierState st;
    st.z.assign(prob.n, 0.0);
    const double shrink = (max_omega_norm > 0.0) ? std::min(0.95, 0.95 / max_omega_norm) : 0.95;
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t j = 0; j < 2 * M; ++j)
            st.z[prob.block(l) + j] = shrink * omega[l][j];
    double min_lin = kInf;
    for (std::size_t k = 0; k < K; ++k)
        min_lin = std::min(min_lin, prob.linear_slack(k, st.z)); // slack at t=0
    st.z[prob.t_index()] = min_lin - std::max(0.1, 0.1 * std::abs(min_lin));
    refresh_slacks(prob, st);

    const double m_total = static_cast<double>(K + L);
    const double gap_target = 0.8 * std::max(eps_inner / power, 1e-13);
    const double tau_final = m_total / gap_target;
    double tau = 1.0;
    double mu = 10.0;

    SocpDiagnostics diag;
    CholeskySolver chol(prob.n);
    std::vector<double> grad, hess, dz;
    std::size_t crawl_rounds = 0;

    while (true)
    {
        if (trace_enabled())
            std::fprintf(stderr, "  stage %zu tau=%.3e mu=%.1f K=%zu L=%zu\n",
                         diag.barrier_stages + 1, tau, mu, K, L);
        CenterOutcome res = center(prob, st, tau, chol, grad, hess, dz);
        diag.newton_steps += res.steps;
        ++diag.barrier_stages;

        const double lambda = std::sqrt(std::max(res.decrement2, 0.0));
        // lambda <= 0.25 is centered enough both to certify (gap at most
        // (m + lambda sqrt(m)) / tau via the slack multipliers) and to follow
        // the path to the next stage
        if (lambda > 0.25)
        {
            // Long-step crawl: with many nearly parallel constraints a x10
            // stage can cost O(m) damped steps. Each round still provably
            // decreases the barrier, so re-center at the same tau and take
            // gentler stages from here on.
            if (res.stalled && res.steps == 0)
                throw SolverError("subproblem barrier cannot factor its Newton system", lambda);
            mu = std::max(0.5 * mu, 1.5);
            if (++crawl_rounds > 60)
                throw SolverError("subproblem barrier failed to center at tau " +
                                      std::to_string(tau) + "; Newton decrement " +
                                      std::to_string(lambda),
                                  lambda);
            continue;
        }
        crawl_rounds = 0;
        if (tau >= tau_final)
        {
            diag.duality_gap = power * (m_total + lambda * std::sqrt(m_total)) / tau;
            break;
        }
        if (res.steps <= 6)
            mu = std::min(mu * 1.7, 40.0);
        else if (res.steps >= 25)
            mu = std::max(0.5 * mu, 1.5);
        tau = std::min(tau * mu, tau_final);
    }

    refresh_slacks(prob, st);
    barrier_gradient(prob, st, tau, grad);
    double gnorm = 0.0;
    for (double g : grad)
        gnorm += g * g;

    diag.kkt_residual = std::sqrt(gnorm) / tau;
    diag.min_slack = kInf;
    for (double s : st.slack)
        diag.min_slack = std::min(diag.min_slack, s);
    for (double q : st.qgap)
        diag.min_slack = std::min(diag.min_slack, q);
    diag.converged = true;

    SubproblemResult result;
    result.t = power * st.z[prob.t_index()];
    result.diag = diag;
    result.vectors.reserve(L);
    for (std::size_t l = 0; l < L; ++l)
    {
        std::vector<Complex> entries(M);
        const std::size_t base = prob.block(l);
        for (std::size_t j = 0; j < M; ++j)
            entries[j] = sqrt_p * Complex(st.z[base + 2 * j], st.z[base + 2 * j + 1]);
        result.vectors.emplace_back(std::move(entries));
    }
    return result;
}

} // namespace beamdb
