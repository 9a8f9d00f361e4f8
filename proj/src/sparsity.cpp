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
#include "irsra/sparsity.hpp"
#include "irsra/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace irsra {

namespace {

constexpr double kGammaCap = 1099511627776.0; // 2^40
constexpr double kGammaFloor = 1e-12;

} // namespace

SparsityParams SparsityParams::from_delta(double delta)
{
    SparsityParams p;
    p.delta = delta;
    p.alpha = alpha_from_delta(delta);
    return p;
}

double alpha_from_delta(double delta)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    return 1.0 / (delta + 0.01);
}

double delta_upper_bound(const NetworkConfig &c)
{
    const double inner = std::sqrt(16.0 * c.M * c.K * c.N * c.max_p_max());
    return -0.005 + 0.5 * std::sqrt(1e-4 + inner);
}

conic::ConicProblem build_p3(const AggregateH &agg, const NetworkConfig &config, double gamma,
                             const SparsityParams &params)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("build_p3: gamma must be positive and finite");
    const int K = agg.K();
    const int N = agg.N();
    const int M = config.M;
    const int L = config.L;
    const int t0 = 2 * N * K;
    conic::ConicProblem p(t0 + M);
    for (int m = 0; m < M; ++m)
        p.objective[t0 + m] = params.alpha;

    std::vector<conic::ComplexEmbedding> col;
    for (int k = 0; k < K; ++k)
        col.emplace_back(N, 2 * k * N);

    // group norms
    for (int m = 0; m < M; ++m)
    {
        auto &c = p.add_soc();
        c.c_row.add(t0 + m, 1.0);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < L; ++l)
            {
                const int n = m * L + l;
                c.add_row().add(col[k].re(n), 1.0);
                c.add_row().add(col[k].im(n), 1.0);
            }
    }

    // SINR targets, cascades normalized by sigma
    const double inv_sigma = 1.0 / config.sigma();
    const double lead = std::sqrt(1.0 + 1.0 / gamma);
    for (int k = 0; k < K; ++k)
    {
        auto &c = p.add_soc();
        col[k].add_re_inner(c.c_row, agg.at(k, k), lead * inv_sigma);
        for (int j = 0; j < K; ++j)
        {
            col[j].add_re_inner(c.add_row(), agg.at(j, k), inv_sigma);
            col[j].add_im_inner(c.add_row(), agg.at(j, k), inv_sigma);
        }
        c.add_row(1.0);

        conic::SparseRow im;
        col[k].add_im_inner(im, agg.at(k, k), inv_sigma);
        p.add_eq(std::move(im), 0.0);
    }

    // per-element caps
    for (int k = 0; k < K; ++k)
    {
        const double r = std::sqrt(config.p_max_w[static_cast<std::size_t>(k)]);
        for (int n = 0; n < N; ++n)
            p.soc_constraints.push_back(col[k].magnitude_cap(n, r));
    }
    return p;
}

CMatrix extract_phi_bar(const RVector &x, int N, int K)
{
    CMatrix phi(N, K);
    for (int k = 0; k < K; ++k)
        phi.col(k) = conic::ComplexEmbedding(N, 2 * k * N).extract(x);
    return phi;
}

const FeasibilityCache::Entry *FeasibilityCache::find(double gamma) const
{
    const auto it = entries_.find(gamma);
    return it == entries_.end() ? nullptr : &it->second;
}

const FeasibilityCache::Entry &FeasibilityCache::insert(double gamma, Entry e)
{
    return entries_.insert_or_assign(gamma, std::move(e)).first->second;
}

FeasibilityResult feasibility_value(const AggregateH &agg, const NetworkConfig &config, double gamma,
                                    const SparsityParams &params, FeasibilityCache *cache)
{
    const FeasibilityCache::Entry *entry = cache ? cache->find(gamma) : nullptr;
    FeasibilityCache::Entry local;
    if (!entry)
    {
        const conic::ConicProblem prob = build_p3(agg, config, gamma, params);
        const conic::SolveReport rep = conic::solve(prob, params.solver);
        if (rep.status == conic::SolveStatus::numerical_failure)
            throw SolverFailure("group-sparse problem at gamma " + format_double(gamma) + ": " + rep.message);
        local.status = rep.status;
        local.iterations = rep.iterations;
        if (rep.status == conic::SolveStatus::optimal)
        {
            local.phi_bar = extract_phi_bar(rep.x, agg.N(), agg.K());
            local.norm = mixed_norm(local.phi_bar, config.L);
        }
        else
            local.norm = std::numeric_limits<double>::infinity();
        if (cache)
        {
            cache->count_solve();
            entry = &cache->insert(gamma, std::move(local));
        }
        else
            entry = &local;
    }

    FeasibilityResult out;
    out.status = entry->status;
    out.solution.gamma = gamma;
    out.solution.alpha = params.alpha;
    if (entry->status == conic::SolveStatus::optimal)
    {
        out.solution.phi_bar = entry->phi_bar;
        out.solution.block_norms = row_block_norms(entry->phi_bar, config.L);
        out.solution.objective = params.alpha * out.solution.block_norms.sum();
        out.value = out.solution.objective;
    }
    else
    {
        out.solution.phi_bar = CMatrix::Zero(agg.N(), agg.K());
        out.solution.block_norms = RVector::Zero(config.M);
        out.value = std::numeric_limits<double>::infinity();
    }
    return out;
}

SparseSolution bisect_gamma(const AggregateH &agg, const NetworkConfig &config, const SparsityParams &params,
                            FeasibilityCache *cache, std::vector<BisectionStep> *trace)
{
    FeasibilityCache own;
    if (!cache)
        cache = &own;

    SparseSolution best;
    best.alpha = params.alpha;
    best.gamma = 0.0;
    best.phi_bar = CMatrix::Zero(agg.N(), agg.K());
    best.block_norms = RVector::Zero(config.M);
    best.objective = 0.0;

    auto test = [&](double gamma) {
        FeasibilityResult r = feasibility_value(agg, config, gamma, params, cache);
        const bool ok = r.feasible(params.delta);
        if (trace)
            trace->push_back({gamma, r.value, ok, r.status, r.solution.block_norms});
        if (ok && gamma > best.gamma)
            best = std::move(r.solution);
        return ok;
    };

    double lo = params.gamma_lo > 0.0 ? params.gamma_lo : 0.0;
    double hi = params.gamma_hi > 0.0 ? params.gamma_hi : std::numeric_limits<double>::infinity();
    // earlier solves already settle some targets for this delta
    auto settled_feasible = [&](const FeasibilityCache::Entry &e) {
        return e.status == conic::SolveStatus::optimal && params.alpha * e.norm <= params.delta;
    };
    for (const auto &[g, e] : cache->entries())
        if (settled_feasible(e))
            lo = std::max(lo, g);
    // solver noise near the feasibility edge can leave failures below lo; ignore those
    for (const auto &[g, e] : cache->entries())
        if (!settled_feasible(e) && g > lo)
            hi = std::min(hi, g);
    if (lo > 0.0 && !test(lo))
        lo = 0.0; // the caller's guess was wrong; fall back to 0
    if (!(hi > lo) || !std::isfinite(hi))
    {
        hi = std::max(1.0, 2.0 * lo);
        while (test(hi))
        {
            lo = hi;
            if (hi >= kGammaCap)
                throw BracketFailure("SINR target still feasible at 2^40");
            hi *= 2.0;
        }
    }
    while (hi - lo > params.gamma_tol * hi)
    {
        if (hi < kGammaFloor)
            break;
        const double mid = 0.5 * (lo + hi);
        if (test(mid))
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

void write_bisection_trace(std::ostream &out, const std::vector<BisectionStep> &steps)
{
    std::size_t M = 0;
    for (const auto &s : steps)
        M = std::max(M, static_cast<std::size_t>(s.block_norms.size()));
    std::vector<std::string> head{"step", "gamma", "value", "feasible", "status"};
    for (std::size_t m = 0; m < M; ++m)
        head.push_back("block_norm_" + std::to_string(m + 1));
    write_csv_row(out, head);
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        const auto &s = steps[i];
        std::vector<std::string> f{std::to_string(i), format_double(s.gamma), format_double(s.value),
                                   s.feasible ? "1" : "0", conic::to_string(s.status)};
        for (std::size_t m = 0; m < M; ++m)
            f.push_back(m < static_cast<std::size_t>(s.block_norms.size()) ? format_double(s.block_norms[static_cast<Eigen::Index>(m)]) : "");
        write_csv_row(out, f);
    }
}

ModuleSelection identify_modules(const SparseSolution &sol, const NetworkConfig &config, const SparsityParams &params)
{
    const int M = static_cast<int>(sol.block_norms.size());
    ModuleSelection out;
    out.mask = ModuleMask(M);
    const double top = M ? sol.block_norms.maxCoeff() : 0.0;
    if (!(top > 0.0))
    {
        out.degenerate = true;
        return out;
    }
    std::vector<int> active;
    for (int m = 0; m < M; ++m)
        if (sol.block_norms[m] > params.block_threshold_rel * top)
            active.push_back(m);
    if (config.Q && static_cast<int>(active.size()) > *config.Q)
    {
        std::stable_sort(active.begin(), active.end(),
                         [&](int a, int b) { return sol.block_norms[a] > sol.block_norms[b]; });
        active.resize(static_cast<std::size_t>(*config.Q));
    }
    for (int m : active)
        out.mask.active[static_cast<std::size_t>(m)] = true;
    return out;
}

} // namespace irsra
