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
#include "verify/oracles.hpp"

#include <cmath>
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

bool valid_state(const AltOptState &s, const NetworkConfig &c, const ModuleMask &mask)
{
    if (!s.phases.magnitudes_ok() || !s.powers.within(c.p_max_w, 1e-12) || s.powers.p.minCoeff() < 0.0)
        return false;
    for (int m = 0; m < c.M; ++m)
        if (!mask.active[static_cast<std::size_t>(m)] && s.phases.block(m).norm() != 0.0)
            return false;
    return true;
}

} // namespace

TEST_CASE("init: empty mask is an error")
{
    const NetworkConfig c = unit_config(2, 2, 2);
    const ChannelSet ch = verify::random_channels(2, 4, 1);
    CHECK_THROWS_AS(init_state(ch, ModuleMask(2), c, 1), std::invalid_argument);
    CHECK_THROWS_AS(algorithm1(ch, ModuleMask(2), c, 1), std::invalid_argument);
}

TEST_CASE("init: half power, unit phases on the mask, deterministic")
{
    const NetworkConfig c = unit_config(2, 3, 2, 0.8);
    const ChannelSet ch = verify::random_channels(2, 6, 2);
    const ModuleMask mask = ModuleMask::from_indices(3, {0, 2});
    const AltOptState a = init_state(ch, mask, c, 7);
    const AltOptState b = init_state(ch, mask, c, 7);
    CHECK(a.phases.phi() == b.phases.phi());
    CHECK(a.powers.p == b.powers.p);
    CHECK(a.powers.p.isApproxToConstant(0.4));
    for (int n = 0; n < 6; ++n)
        CHECK(std::abs(a.phases.phi()[n]) == Approx(n / 2 == 1 ? 0.0 : 1.0).margin(1e-15));
    CHECK(a.gamma_out == Approx(min_sinr(ch, a.phases, a.powers, 1.0)));
    CHECK(init_state(ch, mask, c, 8).phases.phi() != a.phases.phi());
}

TEST_CASE("init: K=1 gamma is p |hbar^T phi|^2 / sigma2")
{
    NetworkConfig c = unit_config(1, 2, 2, 2.0);
    c.sigma2_w = 0.5;
    const ChannelSet ch = verify::random_channels(1, 4, 3);
    const AltOptState s = init_state(ch, ModuleMask::all(2), c, 3);
    const AggregateH agg = precompute(ch);
    const double expect = 1.0 * std::norm(Complex(agg.at(0, 0).transpose() * s.phases.phi())) / 0.5;
    CHECK(s.gamma_out == Approx(expect).epsilon(1e-12));
}

TEST_CASE("K=1 converges to the aligned closed form")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const NetworkConfig c = unit_config(1, 3, 4, 1.5);
        const ChannelSet ch = verify::random_channels(1, 12, 40 + seed);
        const ModuleMask mask = ModuleMask::from_indices(3, {0, 2});
        const AltOptState s = algorithm1(ch, mask, c, seed);
        const double closed = verify::single_pair_optimum(ch, mask, c.L, 1.5, 1.0);
        CHECK(s.gamma_out >= 0.99 * closed);
        CHECK(s.gamma_out <= closed * (1.0 + 1e-9));
        CHECK(s.powers.p[0] == Approx(1.5));
        CHECK(valid_state(s, c, mask));
    }
}

TEST_CASE("phase step at a fixed point changes nothing")
{
    const NetworkConfig c = unit_config(1, 1, 3);
    const ChannelSet ch = verify::random_channels(1, 3, 9);
    const ModuleMask mask = ModuleMask::all(1);
    AltOptState s = init_state(ch, mask, c, 1);
    // aligned phases: conj(g) h phi all real positive
    const AggregateH agg = precompute(ch);
    for (int n = 0; n < 3; ++n)
        s.phases.phi()[n] = std::polar(1.0, -std::arg(agg.at(0, 0)[n]));
    s.powers.p[0] = 1.0;
    s.gamma_out = min_sinr(ch, s.phases, s.powers, 1.0);
    const double before = s.gamma_out;
    phase_step(s, ch, agg, c, mask);
    CHECK(std::abs(s.gamma_out - before) < 1e-6 * before);
}

TEST_CASE("random K=2: gamma nondecreasing over 10 steps")
{
    const NetworkConfig c = unit_config(2, 2, 3);
    const ModuleMask mask = ModuleMask::all(2);
    for (std::uint64_t seed = 0; seed < 4; ++seed)
    {
        const ChannelSet ch = verify::random_channels(2, 6, 60 + seed);
        const AggregateH agg = precompute(ch);
        AltOptState s = init_state(ch, mask, c, seed);
        for (int i = 0; i < 10; ++i)
        {
            const double before = s.gamma_out;
            if (i % 2 == 0)
                phase_step(s, ch, agg, c, mask);
            else
                power_step(s, ch, c);
            CHECK(s.gamma_out >= before - 1e-6 * std::max(before, 1.0));
            CHECK(s.gamma_out == Approx(min_sinr(ch, s.phases, s.powers, 1.0)).epsilon(1e-6));
            CHECK(valid_state(s, c, mask));
        }
    }
}

TEST_CASE("power control: single pair and decoupled pairs use full power")
{
    RMatrix G1(1, 1);
    G1 << 0.7;
    const RVector p1 = optimize_powers(G1, {2.0}, 1.0, RVector::Constant(1, 1.0), {});
    CHECK(p1[0] == Approx(2.0));

    RMatrix G(3, 3);
    G << 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.5;
    const RVector p = optimize_powers(G, {1.0, 0.5, 2.0}, 0.1, RVector::Constant(3, 0.25), {});
    CHECK(p[0] == Approx(1.0));
    CHECK(p[1] == Approx(0.5));
    CHECK(p[2] == Approx(2.0));
}

TEST_CASE("power control: symmetric two pairs match the grid oracle")
{
    for (double cross : {0.05, 0.3, 1.2})
    {
        RMatrix G(2, 2);
        G << 1.0, cross, cross, 1.0;
        const std::vector<double> pm{1.0, 1.0};
        const RVector p = optimize_powers(G, pm, 0.1, RVector::Constant(2, 0.5), {});
        const verify::PowerGridResult grid = verify::power_grid_2pair(G, pm, 0.1, 1000);
        const RVector s = sinr_from_gains(G, p, 0.1);
        CHECK(p[0] == Approx(p[1]).epsilon(1e-3));
        CHECK(grid.p1 == Approx(grid.p2).margin(1e-3));
        CHECK(s.minCoeff() >= grid.best * (1.0 - 1e-6));
    }
}

TEST_CASE("power control: asymmetric pairs reach the grid optimum")
{
    RMatrix G(2, 2);
    G << 2.0, 0.4, 0.9, 0.6;
    const std::vector<double> pm{1.0, 0.7};
    const RVector p = optimize_powers(G, pm, 0.2, RVector::Constant(2, 0.3), {});
    const verify::PowerGridResult grid = verify::power_grid_2pair(G, pm, 0.2, 1000);
    CHECK(sinr_from_gains(G, p, 0.2).minCoeff() >= grid.best * (1.0 - 1e-4));
}

TEST_CASE("M=2, L=1, K=2 beats random sampling")
{
    const NetworkConfig c = unit_config(2, 2, 1);
    const ModuleMask mask = ModuleMask::all(2);
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const ChannelSet ch = verify::random_channels(2, 2, 80 + seed);
        const AltOptState s = algorithm1(ch, mask, c, seed);
        const double sampled = verify::random_sampling_best(ch, mask, c, 1000, seed);
        CHECK(s.gamma_out >= sampled * (1.0 - 1e-6));
    }
}

TEST_CASE("algorithm1 history, determinism and trace")
{
    const NetworkConfig c = unit_config(3, 3, 2);
    const ModuleMask mask = ModuleMask::from_indices(3, {1, 2});
    const ChannelSet ch = verify::random_channels(3, 6, 99);
    const AltOptState a = algorithm1(ch, mask, c, 5);
    const AltOptState b = algorithm1(ch, mask, c, 5);
    CHECK(a.history == b.history);
    CHECK(a.phases.phi() == b.phases.phi());
    REQUIRE(a.history.size() >= 2);
    for (std::size_t i = 1; i < a.history.size(); ++i)
        CHECK(a.history[i] >= a.history[i - 1] - 1e-6 * std::max(a.history[i - 1], 1.0));
    CHECK(a.gamma_out == Approx(min_sinr(ch, a.phases, a.powers, 1.0)).epsilon(1e-6));
    CHECK(valid_state(a, c, mask));

    std::ostringstream s;
    write_altopt_trace(s, a);
    CHECK(s.str().rfind("iteration,step,gamma_out,min_sinr_true,solver_status", 0) == 0);
    CHECK(s.str().find(",init,") != std::string::npos);
}

TEST_CASE("joint step never lowers min-SINR and escapes a block-wise stall")
{
    const NetworkConfig c = unit_config(2, 2, 1);
    const ModuleMask mask = ModuleMask::all(2);
    const ChannelSet ch = verify::random_channels(2, 2, 80);
    const AggregateH agg = precompute(ch);
    AltOptState s = init_state(ch, mask, c, 0);
    // alternate to a block-wise fixed point
    for (int i = 0; i < 40; ++i)
    {
        phase_step(s, ch, agg, c, mask);
        power_step(s, ch, c);
    }
    const double stall = s.gamma_out;
    double radius = 0.1;
    for (int i = 0; i < 30; ++i)
    {
        const double before = s.gamma_out;
        const bool ok = joint_step(s, ch, agg, c, mask, radius);
        CHECK(s.gamma_out >= before);
        CHECK(s.gamma_out == Approx(min_sinr(ch, s.phases, s.powers, 1.0)).epsilon(1e-12));
        CHECK(valid_state(s, c, mask));
        radius = ok ? std::min(1.0, 2.0 * radius) : 0.25 * radius;
    }
    CHECK(s.gamma_out > stall * 1.01);
}
