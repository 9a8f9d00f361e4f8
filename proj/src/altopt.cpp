// SPDX-License-Identifier: Apache-2.0
//
// irsra - reflection resource allocation for modular IRS-aided networks
// Copyright (C) 2026 The irsra authors
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
// ------------------------------------------------------------------------
#include "irsra/altopt.hpp"
#include "irsra/csv.hpp"
#include "irsra/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace irsra {

namespace {

constexpr int kMaxRejections = 3;

std::vector<int> active_elements(const ModuleMask &mask, int L)
{
    std::vector<int> out;
    for (int m : mask.indices())
        for (int l = 0; l < L; ++l)
            out.push_back(m * L + l);
    return out;
}

CVector gather(const CVector &v, const std::vector<int> &idx)
{
    CVector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = v[idx[i]];
    return out;
}

bool accept(double candidate, double current, double slack)
{
    return std::isfinite(candidate) && candidate >= current - slack * std::max(current, 0.0);
}

void push_trace(AltOptState &s, const char *step, double true_min, const std::string &status)
{
    s.trace.push_back({s.iteration, step, s.gamma_out, true_min, status});
}

} // namespace

double min_sinr(const ChannelSet &ch, const PhaseProfile &phases, const PowerAllocation &powers, double sigma2)
{
    return sinr_direct_all(ch, phases, powers, sigma2).minCoeff();
}

AltOptState init_state(const ChannelSet &ch, const ModuleMask &mask, const NetworkConfig &config, std::uint64_t seed)
{
    if (mask.size() != config.M)
        throw std::invalid_argument("mask size differs from module count");
    if (mask.cardinality() == 0)
        throw std::invalid_argument("algorithm needs at least one active module");
    AltOptState s;
    CVector phi = CVector::Zero(config.N);
    RandomStream rng(seed);
    for (int n : active_elements(mask, config.L))
        phi[n] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    s.phases = PhaseProfile(std::move(phi), config.L);
    s.powers.p.resize(config.K);
    for (int k = 0; k < config.K; ++k)
        s.powers.p[k] = 0.5 * config.p_max_w[static_cast<std::size_t>(k)];
    s.gamma_out = min_sinr(ch, s.phases, s.powers, config.sigma2_w);
    s.history.push_back(s.gamma_out);
    push_trace(s, "init", s.gamma_out, "");
    return s;
}

bool phase_step(AltOptState &s, const ChannelSet &ch, const AggregateH &agg, const NetworkConfig &config,
                const ModuleMask &mask, const AltOptSettings &settings)
{
    const int K = config.K;
    const std::vector<int> act = active_elements(mask, config.L);
    const int A = static_cast<int>(act.size());
    const double g = std::max(s.gamma_out, 0.0);
    const double inv_sigma = 1.0 / config.sigma();
    // the cascade is hbar^T phi, so the problem is posed in y = conj(phi)
    const CVector phi0 = gather(s.phases.phi(), act).conjugate();

    conic::ComplexEmbedding emb(A, 0);
    const int gvar = 2 * A;
    conic::ConicProblem prob(2 * A + 1);
    prob.objective[gvar] = -1.0;

    for (int k = 0; k < K; ++k)
    {
        const CVector a = gather(agg.at(k, k), act) * (std::sqrt(s.powers.p[k]) * inv_sigma);
        const Complex sk = a.dot(phi0);
        std::vector<CVector> b;
        double vk = 1.0;
        for (int j = 0; j < K; ++j)
            if (j != k)
            {
                b.push_back(gather(agg.at(j, k), act) * (std::sqrt(s.powers.p[j]) * inv_sigma));
                vk += std::norm(b.back().dot(phi0));
            }
        // aff(x, gamma) = [2 Re(conj(s) a^H x) - |s|^2 - g + g v] / v - gamma
        conic::SparseRow aff;
        emb.add_re_inner(aff, a * sk, 2.0 / vk);
        aff.add(gvar, -1.0);
        const double aff0 = (-std::norm(sk) - g + g * vk) / vk;
        if (b.empty() || g == 0.0)
        {
            prob.add_halfspace(aff, aff0);
            continue;
        }
        // ||q||^2 <= aff as ||(2q; aff - 1)|| <= aff + 1
        auto &c = prob.add_soc();
        const double qs = 2.0 * std::sqrt(g / vk);
        for (const auto &bj : b)
        {
            emb.add_re_inner(c.add_row(), bj, qs);
            emb.add_im_inner(c.add_row(), bj, qs);
        }
        c.add_row(aff0 - 1.0) = aff;
        c.c_row = aff;
        c.d = aff0 + 1.0;
    }
    for (int i = 0; i < A; ++i)
        prob.soc_constraints.push_back(emb.magnitude_cap(i, 1.0));

    const conic::SolveReport rep = conic::solve(prob, settings.solver);
    const std::string status = conic::to_string(rep.status);
    if (rep.x.size() == 0 || (rep.status != conic::SolveStatus::optimal && rep.status != conic::SolveStatus::max_iterations))
    {
        s.flagged = true;
        ++s.rejections;
        push_trace(s, "phase", s.gamma_out, status);
        return false;
    }
    CVector x = emb.extract(rep.x);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > 1.0)
            x[i] /= std::abs(x[i]);

    PhaseProfile cand = s.phases;
    const CVector blended = phi0 + s.trust * (x - phi0);
    for (int i = 0; i < A; ++i)
        cand.phi()[act[static_cast<std::size_t>(i)]] = std::conj(blended[i]);
    const double true_min = min_sinr(ch, cand, s.powers, config.sigma2_w);
    if (!accept(true_min, s.gamma_out, settings.accept_slack))
    {
        s.trust *= 0.5;
        ++s.rejections;
        push_trace(s, "phase", s.gamma_out, status + " rejected");
        return false;
    }
    s.phases = std::move(cand);
    s.gamma_out = true_min;
    s.trust = std::min(1.0, 2.0 * s.trust);
    s.rejections = 0;
    push_trace(s, "phase", s.gamma_out, status);
    return true;
}

RVector optimize_powers(const RMatrix &G, const std::vector<double> &p_max, double sigma2, const RVector &p0,
                        const AltOptSettings &settings, conic::SolveStatus *status)
{
    const int K = static_cast<int>(G.rows());
    RMatrix gt(K, K);
    for (int j = 0; j < K; ++j)
        gt.row(j) = G.row(j) * (p_max[static_cast<std::size_t>(j)] / sigma2);
    auto sinr = [&](const RVector &x) { return sinr_from_gains(gt, x, 1.0); };
    auto interference = [&](const RVector &x, int k) {
        double acc = 0.0;
        for (int j = 0; j < K; ++j)
            if (j != k)
                acc += x[j] * gt(j, k);
        return acc;
    };

    RVector x(K);
    for (int k = 0; k < K; ++k)
        x[k] = std::clamp(p0[k] / p_max[static_cast<std::size_t>(k)], 0.0, 1.0);
    double g = sinr(x).minCoeff();
    if (status)
        *status = conic::SolveStatus::optimal;

    for (int it = 0; it < settings.max_power_inner; ++it)
    {
        conic::ConicProblem lp(K + 1);
        lp.objective[K] = -1.0;
        for (int k = 0; k < K; ++k)
            lp.set_bounds(k, 0.0, 1.0);
        for (int k = 0; k < K; ++k)
        {
            const double dk = interference(x, k) + 1.0;
            conic::SparseRow row;
            row.add(k, gt(k, k) / dk);
            for (int j = 0; j < K; ++j)
                if (j != k)
                    row.add(j, -g * gt(j, k) / dk);
            row.add(K, -1.0);
            lp.add_halfspace(std::move(row), g - g / dk);
        }
        const conic::SolveReport rep = conic::solve(lp, settings.solver);
        if (status)
            *status = rep.status;
        if (rep.status != conic::SolveStatus::optimal)
            break;
        RVector xn = rep.x.head(K).cwiseMax(0.0).cwiseMin(1.0);
        const double gn = sinr(xn).minCoeff();
        if (!(gn >= g))
            break;
        const double gain = (gn - g) / std::max(g, 1e-300);
        x = xn;
        g = gn;
        if (gain < 1e-9)
            break;
    }

    // Uniform scale-up never lowers any SINR; STs that interfere with nobody go to full power.
    const double top = x.maxCoeff();
    if (top > 0.0 && top < 1.0)
    {
        RVector xs = x / top;
        if (sinr(xs).minCoeff() >= g)
            x = xs;
    }
    for (int k = 0; k < K; ++k)
    {
        bool quiet = true;
        for (int j = 0; j < K; ++j)
            if (j != k && gt(k, j) != 0.0)
                quiet = false;
        if (quiet)
            x[k] = 1.0;
    }

    RVector p(K);
    for (int k = 0; k < K; ++k)
        p[k] = x[k] * p_max[static_cast<std::size_t>(k)];
    return p;
}

bool power_step(AltOptState &s, const ChannelSet &ch, const NetworkConfig &config, const AltOptSettings &settings)
{
    const RMatrix G = effective_gains(ch, s.phases.phi());
    conic::SolveStatus st = conic::SolveStatus::optimal;
    PowerAllocation cand;
    cand.p = optimize_powers(G, config.p_max_w, config.sigma2_w, s.powers.p, settings, &st);
    const double true_min = min_sinr(ch, s.phases, cand, config.sigma2_w);
    if (st == conic::SolveStatus::numerical_failure)
        s.flagged = true;
    if (!accept(true_min, s.gamma_out, settings.accept_slack))
    {
        s.trust *= 0.5;
        ++s.rejections;
        push_trace(s, "power", s.gamma_out, conic::to_string(st) + " rejected");
        return false;
    }
    s.powers = std::move(cand);
    s.gamma_out = true_min;
    s.rejections = 0;
    push_trace(s, "power", s.gamma_out, conic::to_string(st));
    return true;
}

bool joint_step(AltOptState &s, const ChannelSet &ch, const AggregateH &agg, const NetworkConfig &config,
                const ModuleMask &mask, double radius, const AltOptSettings &settings)
{
    const int K = config.K;
    const std::vector<int> act = active_elements(mask, config.L);
    const int A = static_cast<int>(act.size());
    const double g = std::max(s.gamma_out, 0.0);
    const double inv_sigma = 1.0 / config.sigma();
    const CVector y0 = gather(s.phases.phi(), act).conjugate();
    RVector x0(K), pm(K);
    for (int k = 0; k < K; ++k)
    {
        pm[k] = config.p_max_w[static_cast<std::size_t>(k)];
        x0[k] = s.powers.p[k] / pm[k];
    }

    // variables: dy (2A reals), dx (K), t
    conic::ComplexEmbedding emb(A, 0);
    const int xv = 2 * A;
    const int tv = 2 * A + K;
    conic::ConicProblem prob(tv + 1);
    prob.objective[tv] = -1.0;
    for (int i = 0; i < 2 * A; ++i)
        prob.set_bounds(i, -radius, radius);
    for (int k = 0; k < K; ++k)
        prob.set_bounds(xv + k, std::max(-x0[k], -radius), std::min(1.0 - x0[k], radius));

    for (int k = 0; k < K; ++k)
    {
        // u0 + du - g (v0 + dv) - (t - g) v0 >= 0, divided by v0
        const CVector a = gather(agg.at(k, k), act) * inv_sigma;
        const Complex skk = a.dot(y0);
        const double u0 = pm[k] * x0[k] * std::norm(skk);
        double v0 = 1.0;
        for (int j = 0; j < K; ++j)
            if (j != k)
                v0 += pm[j] * x0[j] * std::norm(gather(agg.at(j, k), act).dot(y0) * inv_sigma);
        conic::SparseRow row;
        emb.add_re_inner(row, a * skk, 2.0 * pm[k] * x0[k] / v0);
        row.add(xv + k, pm[k] * std::norm(skk) / v0);
        for (int j = 0; j < K; ++j)
            if (j != k)
            {
                const CVector b = gather(agg.at(j, k), act) * inv_sigma;
                const Complex sjk = b.dot(y0);
                emb.add_re_inner(row, b * sjk, -g * 2.0 * pm[j] * x0[j] / v0);
                row.add(xv + j, -g * pm[j] * std::norm(sjk) / v0);
            }
        row.add(tv, -1.0);
        prob.add_halfspace(row, u0 / v0);
    }
    for (int i = 0; i < A; ++i)
    {
        auto &c = prob.add_soc();
        c.add_row(y0[i].real()).add(emb.re(i), 1.0);
        c.add_row(y0[i].imag()).add(emb.im(i), 1.0);
        c.d = 1.0;
    }

    const conic::SolveReport rep = conic::solve(prob, settings.solver);
    const std::string status = conic::to_string(rep.status);
    if (rep.x.size() == 0 || (rep.status != conic::SolveStatus::optimal && rep.status != conic::SolveStatus::max_iterations))
    {
        push_trace(s, "joint", s.gamma_out, status);
        return false;
    }
    CVector y = y0 + emb.extract(rep.x);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (std::abs(y[i]) > 1.0)
            y[i] /= std::abs(y[i]);
    PhaseProfile cand = s.phases;
    for (int i = 0; i < A; ++i)
        cand.phi()[act[static_cast<std::size_t>(i)]] = std::conj(y[i]);
    PowerAllocation pw;
    pw.p.resize(K);
    for (int k = 0; k < K; ++k)
        pw.p[k] = std::clamp(x0[k] + rep.x[xv + k], 0.0, 1.0) * pm[k];
    const double true_min = min_sinr(ch, cand, pw, config.sigma2_w);
    if (!(true_min > s.gamma_out))
    {
        push_trace(s, "joint", s.gamma_out, status + " rejected");
        return false;
    }
    s.phases = std::move(cand);
    s.powers = std::move(pw);
    s.gamma_out = true_min;
    push_trace(s, "joint", s.gamma_out, status);
    return true;
}

AltOptState algorithm1(const ChannelSet &ch, const ModuleMask &mask, const NetworkConfig &config, std::uint64_t seed,
                       const AltOptSettings &settings)
{
    AltOptState s = init_state(ch, mask, config, seed);
    const AggregateH agg = precompute(ch);
    for (int outer = 1; outer <= settings.max_outer; ++outer)
    {
        s.iteration = outer;
        const double prev = s.gamma_out;
        phase_step(s, ch, agg, config, mask, settings);
        power_step(s, ch, config, settings);
        const bool stalled = s.rejections >= kMaxRejections ||
                             std::abs(s.gamma_out - prev) / std::max(s.gamma_out, 1e-12) < settings.tol;
        if (stalled)
        {
            // Block-wise optimal is not jointly optimal for a max-min objective;
            // resume alternating only if moving both blocks together pays off.
            const double before = s.gamma_out;
            double radius = 0.1;
            for (int it = 0; it < settings.max_joint && radius > 1e-6; ++it)
                radius = joint_step(s, ch, agg, config, mask, radius, settings) ? std::min(1.0, 2.0 * radius)
                                                                                 : 0.25 * radius;
            s.history.push_back(s.gamma_out);
            if ((s.gamma_out - before) / std::max(s.gamma_out, 1e-12) < settings.tol)
                break;
            s.rejections = 0;
            s.trust = 1.0;
            continue;
        }
        s.history.push_back(s.gamma_out);
    }
    return s;
}

void write_altopt_trace(std::ostream &out, const AltOptState &s)
{
    write_csv_row(out, {"iteration", "step", "gamma_out", "min_sinr_true", "solver_status"});
    for (const auto &r : s.trace)
        write_csv_row(out, {std::to_string(r.iteration), r.step, format_double(r.gamma_out),
                            format_double(r.min_sinr_true), r.solver_status});
}

} // namespace irsra
