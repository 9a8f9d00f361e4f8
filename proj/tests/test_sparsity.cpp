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
#include "catch_amalgamated.hpp"

#include "irsra/altopt.hpp"
#include "irsra/sparsity.hpp"
#include "verify/oracles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace irsra;
using Catch::Approx;

namespace {

NetworkConfig unit_config(int K, int M, int L, double p_max = 1.0)
{
    NetworkConfig c = reference_config();
    c.K = K;
    c.M = M;
    c.L = L;
    c.N = M * L;
    c.p_max_w.assign(static_cast<std::size_t>(K), p_max);
    c.sigma2_w = 1.0;
    return validate(c);
}

// scalar channel with hbar = 1
ChannelSet unit_scalar()
{
    ChannelSet ch;
    ch.h = {CVector::Ones(1)};
    ch.g = {CVector::Ones(1)};
    ch.direct = CMatrix::Zero(1, 1);
    return ch;
}

RVector embed(const CMatrix &phi_bar, const RVector &t)
{
    const int N = static_cast<int>(phi_bar.rows());
    const int K = static_cast<int>(phi_bar.cols());
    RVector x(2 * N * K + t.size());
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n)
        {
            x[2 * (k * N + n)] = phi_bar(n, k).real();
            x[2 * (k * N + n) + 1] = phi_bar(n, k).imag();
        }
    x.tail(t.size()) = t;
    return x;
}

bool satisfied(const conic::ConicProblem &p, const RVector &x, double tol = 1e-9)
{
    const conic::PointCheck c = conic::check_point(p, x);
    return c.max_cone_violation <= tol && c.max_primal_residual <= tol;
}

} // namespace

TEST_CASE("alpha rule")
{
    CHECK(alpha_from_delta(4.99) == Approx(0.2).epsilon(1e-14));
    CHECK(alpha_from_delta(0.99) == Approx(1.0).epsilon(1e-14));
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 0.1; d < 1e6; d *= 3.0)
    {
        CHECK(alpha_from_delta(d) < prev);
        prev = alpha_from_delta(d);
    }
    CHECK(prev < 1e-5);
    CHECK_THROWS_AS(alpha_from_delta(0.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_from_delta(-1.0), std::invalid_argument);
}

TEST_CASE("delta upper bound")
{
    // 16 * 10 * 5 * 200 * 0.1 = 16000
    const double expect = -0.005 + 0.5 * std::sqrt(1e-4 + std::sqrt(16000.0));
    CHECK(delta_upper_bound(reference_config()) == Approx(expect).epsilon(1e-14));
    CHECK(delta_upper_bound(reference_config()) == Approx(5.618).margin(1e-3));

    NetworkConfig c = reference_config();
    c.p_max_w.assign(5, 1.6);
    CHECK(delta_upper_bound(c) > delta_upper_bound(reference_config()));

    const NetworkConfig tiny = unit_config(1, 1, 1, 1.0 / 16.0);
    CHECK(delta_upper_bound(tiny) == Approx(0.49502).margin(1e-5));
}

TEST_CASE("mixed norm axioms")
{
    for (int s = 0; s < 20; ++s)
    {
        const CMatrix X = CMatrix::Random(6, 2);
        const CMatrix Y = CMatrix::Random(6, 2);
        const double nx = mixed_norm(X, 3);
        CHECK(nx >= 0.0);
        CHECK(std::abs(mixed_norm(Complex(-2.5, 1.0) * X, 3) - std::abs(Complex(-2.5, 1.0)) * nx) <= 1e-12 * nx);
        CHECK(mixed_norm(X + Y, 3) <= nx + mixed_norm(Y, 3) + 1e-12);
    }
    CHECK(mixed_norm(CMatrix::Zero(6, 2), 3) == 0.0);
    CMatrix e = CMatrix::Zero(6, 2);
    e(4, 1) = 1e-200;
    CHECK(mixed_norm(e, 3) > 0.0);

    CMatrix b = CMatrix::Zero(4, 1);
    b << 3, 4, 0, Complex(0, 2);
    const RVector n = row_block_norms(b, 2);
    CHECK(n[0] == Approx(5.0));
    CHECK(n[1] == Approx(2.0));
    CHECK(mixed_norm(b, 2) == Approx(7.0));
    CHECK(mixed_norm(b, 4) == Approx(std::sqrt(29.0)));
}

TEST_CASE("group-sparse problem layout")
{
    const NetworkConfig c = unit_config(2, 3, 2);
    const AggregateH agg = precompute(verify::random_channels(2, 6, 1));
    const conic::ConicProblem p = build_p3(agg, c, 1.5, SparsityParams::from_delta(1.0));
    CHECK(p.n_vars == 2 * 6 * 2 + 3);
    // M group cones, K SINR cones, N*K caps
    REQUIRE(p.soc_constraints.size() == 3 + 2 + 12);
    CHECK(p.eq_constraints.size() == 2);
    CHECK(p.soc_constraints[0].a.size() == 2u * 2 * 2); // 2LK rows
    CHECK(p.soc_constraints[3].a.size() == 2u * 2 + 1); // 2K + 1 rows
    CHECK(p.soc_constraints[5].a.size() == 2u);
    CHECK(p.objective[2 * 6 * 2] == Approx(alpha_from_delta(1.0)));
    CHECK_THROWS_AS(build_p3(agg, c, 0.0, SparsityParams{}), std::invalid_argument);
    CHECK_THROWS_AS(build_p3(agg, c, -1.0, SparsityParams{}), std::invalid_argument);
}

TEST_CASE("group-sparse problem with K=1, N=1 is SINR >= gamma with a real phi_bar")
{
    const NetworkConfig c = unit_config(1, 1, 1, 100.0);
    const AggregateH agg = precompute(unit_scalar());
    const double gamma = 2.0;
    const conic::ConicProblem p = build_p3(agg, c, gamma, SparsityParams{});
    RVector t(1);
    for (double scale : {1.001, 1.5, 3.0})
    {
        CMatrix f(1, 1);
        f(0, 0) = scale * std::sqrt(gamma);
        t[0] = std::abs(f(0, 0));
        CHECK(satisfied(p, embed(f, t)));
    }
    CMatrix f(1, 1);
    f(0, 0) = 0.999 * std::sqrt(gamma);
    t[0] = std::abs(f(0, 0));
    CHECK_FALSE(satisfied(p, embed(f, t)));
    f(0, 0) = Complex(0.0, 2.0); // violates the Im pinning
    t[0] = 2.0;
    CHECK_FALSE(satisfied(p, embed(f, t)));
}

TEST_CASE("group-sparse problem with M=1: objective is alpha times the Frobenius norm")
{
    const NetworkConfig c = unit_config(2, 1, 3);
    const AggregateH agg = precompute(verify::random_channels(2, 3, 4));
    SparsityParams sp = SparsityParams::from_delta(10.0);
    const FeasibilityResult r = feasibility_value(agg, c, 0.1, sp);
    REQUIRE(r.status == conic::SolveStatus::optimal);
    CHECK(r.value == Approx(sp.alpha * r.solution.phi_bar.norm()).epsilon(1e-6));
}

TEST_CASE("group-sparse solutions meet the SINR target")
{
    const NetworkConfig c = unit_config(2, 2, 1);
    for (std::uint64_t s = 0; s < 5; ++s)
    {
        const AggregateH agg = precompute(verify::random_channels(2, 2, 10 + s));
        for (double gamma : {0.05, 0.2, 0.5})
        {
            const FeasibilityResult r = feasibility_value(agg, c, gamma, SparsityParams{});
            if (r.status != conic::SolveStatus::optimal)
                continue;
            const RVector q = sinr_quadratic(agg, r.solution.phi_bar, c.sigma2_w);
            CHECK(q.minCoeff() >= gamma * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("group-sparse value is nondecreasing in gamma and vanishes as gamma -> 0")
{
    const NetworkConfig c = unit_config(2, 3, 2, 4.0);
    const AggregateH agg = precompute(verify::random_channels(2, 6, 21));
    double prev = 0.0;
    for (double gamma : {0.5, 1.0, 2.0, 4.0})
    {
        const FeasibilityResult r = feasibility_value(agg, c, gamma, SparsityParams{});
        CHECK(r.value >= prev * (1.0 - 1e-6));
        prev = r.value;
    }
    const double v6 = feasibility_value(agg, c, 1e-6, SparsityParams{}).value;
    const double v2 = feasibility_value(agg, c, 1e-2, SparsityParams{}).value;
    CHECK(v6 < v2);
    CHECK(v6 < 1e-2);
}

TEST_CASE("tiny noise, K=1: any target is met with a small norm")
{
    NetworkConfig c = unit_config(1, 2, 2);
    c.sigma2_w = 1e-16;
    const AggregateH agg = precompute(verify::random_channels(1, 4, 3));
    for (double gamma : {1.0, 100.0})
    {
        const FeasibilityResult r = feasibility_value(agg, c, gamma, SparsityParams{});
        REQUIRE(r.status == conic::SolveStatus::optimal);
        CHECK(r.value < 1e-5);
    }
}

TEST_CASE("bisection halves the bracket each step")
{
    const NetworkConfig c = unit_config(1, 1, 1, 100.0);
    const AggregateH agg = precompute(unit_scalar());
    SparsityParams sp = SparsityParams::from_delta(1.0);
    sp.alpha = 1.0 / 1.5; // feasible iff alpha sqrt(gamma) <= 1, so gamma* = 2.25
    sp.gamma_lo = 1.0;
    sp.gamma_hi = 4.0;
    std::vector<BisectionStep> trace;
    const SparseSolution s = bisect_gamma(agg, c, sp, nullptr, &trace);
    CHECK(s.gamma >= 1.0);
    CHECK(s.gamma <= 4.0);
    CHECK(s.gamma == Approx(2.25).epsilon(2e-3));
    REQUIRE(trace.size() >= 3);
    CHECK(trace[0].gamma == 1.0);
    CHECK(trace[1].gamma == Approx(2.5));
    for (std::size_t i = 2; i < trace.size(); ++i)
        CHECK(std::abs(trace[i].gamma - trace[i - 1].gamma) == Approx(3.0 / std::pow(2.0, double(i))));
}

TEST_CASE("bisection matches a 1-D grid oracle on the scalar problem")
{
    const NetworkConfig c = unit_config(1, 1, 1, 10.0);
    const AggregateH agg = precompute(unit_scalar());
    for (double delta : {0.5, 2.0, 50.0})
    {
        const SparsityParams sp = SparsityParams::from_delta(delta);
        // largest |phi_bar|^2 with alpha |phi_bar| <= delta and |phi_bar| <= sqrt(p_max)
        double best = 0.0;
        const int n = 200000;
        for (int i = 0; i <= n; ++i)
        {
            const double a = std::sqrt(10.0) * i / n;
            if (sp.alpha * a <= delta)
                best = std::max(best, a * a);
        }
        const SparseSolution s = bisect_gamma(agg, c, sp);
        CHECK(s.gamma == Approx(best).epsilon(3e-3));
    }
}

TEST_CASE("doubling delta never lowers gamma*")
{
    const NetworkConfig c = unit_config(2, 3, 2, 4.0);
    for (std::uint64_t seed : {5u, 6u})
    {
        const AggregateH agg = precompute(verify::random_channels(2, 6, seed));
        for (double delta : {0.5, 1.0})
        {
            const double a = bisect_gamma(agg, c, SparsityParams::from_delta(delta)).gamma;
            const double b = bisect_gamma(agg, c, SparsityParams::from_delta(2 * delta)).gamma;
            CHECK(b >= a * (1.0 - 2e-3));
        }
    }
}

TEST_CASE("cache reuse gives the same answer with fewer solves")
{
    const NetworkConfig c = unit_config(2, 3, 2, 4.0);
    const AggregateH agg = precompute(verify::random_channels(2, 6, 8));
    FeasibilityCache cache;
    const double a = bisect_gamma(agg, c, SparsityParams::from_delta(1.0), &cache).gamma;
    const int first = cache.solves();
    const double b = bisect_gamma(agg, c, SparsityParams::from_delta(1.0), &cache).gamma;
    CHECK(a == b);
    CHECK(cache.solves() - first <= 1);
}

TEST_CASE("module identification by threshold and budget")
{
    NetworkConfig c = unit_config(1, 3, 1);
    SparseSolution s;
    s.block_norms = RVector(3);
    s.block_norms << 1.0, 1e-9, 0.8;
    SparsityParams sp;
    sp.block_threshold_rel = 1e-4;
    ModuleSelection sel = identify_modules(s, c, sp);
    CHECK_FALSE(sel.degenerate);
    CHECK(sel.mask.indices() == std::vector<int>{0, 2});

    NetworkConfig c2 = unit_config(1, 2, 1);
    c2.Q = 1;
    s.block_norms = RVector(2);
    s.block_norms << 0.5, 0.5;
    sel = identify_modules(s, c2, sp);
    CHECK(sel.mask.indices() == std::vector<int>{0});

    s.block_norms = RVector::Zero(2);
    sel = identify_modules(s, c2, sp);
    CHECK(sel.degenerate);
    CHECK(sel.mask.cardinality() == 0);
}

TEST_CASE("selection picks the dominant block, confirmed by enumeration")
{
    const NetworkConfig c = unit_config(1, 3, 1);
    ChannelSet ch = verify::random_channels(1, 3, 31);
    ch.h[0][1] *= 4.0; // make element 1 dominant
    const AggregateH agg = precompute(ch);
    int dominant = 0;
    for (int n = 1; n < 3; ++n)
        if (std::abs(agg.at(0, 0)[n]) > std::abs(agg.at(0, 0)[dominant]))
            dominant = n;
    REQUIRE(dominant == 1);

    // a budget that one module can meet
    SparsityParams sp = SparsityParams::from_delta(0.3);
    const SparseSolution s = bisect_gamma(agg, c, sp);
    const ModuleSelection sel = identify_modules(s, c, sp);
    REQUIRE(sel.mask.cardinality() >= 1);
    CHECK(sel.mask.active[1]);

    // among single modules, the alternating optimizer does best on the dominant one
    double best = -1.0;
    int arg = -1;
    for (const ModuleMask &m : verify::enumerate_subsets(3, 1, 1))
    {
        const double v = algorithm1(ch, m, c, 1).gamma_out;
        if (v > best)
        {
            best = v;
            arg = m.indices().front();
        }
    }
    CHECK(arg == dominant);
    if (sel.mask.cardinality() == 1)
        CHECK(sel.mask.indices().front() == arg);
}

TEST_CASE("bisection trace CSV")
{
    std::vector<BisectionStep> steps{{1.0, 0.5, true, conic::SolveStatus::optimal, RVector::Ones(2)}};
    std::ostringstream s;
    write_bisection_trace(s, steps);
    CHECK(s.str().find("step,gamma,value,feasible,status,block_norm_1,block_norm_2") == 0);
    CHECK(s.str().find("optimal") != std::string::npos);
}
