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

#include "irsra/metrics.hpp"
#include "verify/oracles.hpp"

#include <cmath>

using namespace irsra;
using Catch::Approx;

namespace {

ChannelSet scalar_channels(Complex h, Complex g)
{
    ChannelSet ch;
    ch.h.push_back(CVector::Constant(1, h));
    ch.g.push_back(CVector::Constant(1, g));
    ch.direct = CMatrix::Zero(1, 1);
    return ch;
}

PowerAllocation powers(std::initializer_list<double> p)
{
    PowerAllocation a;
    a.p.resize(static_cast<Eigen::Index>(p.size()));
    int i = 0;
    for (double v : p)
        a.p[i++] = v;
    return a;
}

} // namespace

TEST_CASE("aggregate with unit g is h")
{
    const ChannelSet r = verify::random_channels(2, 5, 1);
    ChannelSet ch = r;
    for (auto &g : ch.g)
        g.setOnes();
    const AggregateH agg = precompute(ch);
    CHECK(agg.at(0, 1) == ch.h[0]);
    CHECK(agg.at(1, 0) == ch.h[1]);
}

TEST_CASE("aggregate hand computation")
{
    ChannelSet ch;
    CVector h(2), g(2);
    h << Complex(1, 0), Complex(0, 1);
    g << Complex(0, 1), Complex(1, 0);
    ch.h = {h};
    ch.g = {g};
    const AggregateH agg = precompute(ch);
    CHECK(agg.at(0, 0)[0] == Complex(0, -1));
    CHECK(agg.at(0, 0)[1] == Complex(0, 1));
    CHECK(agg.stacked(0).size() == 2);
}

TEST_CASE("cascade equals hbar^T phi, i.e. conj(hbar^H conj(phi))")
{
    const ChannelSet ch = verify::random_channels(3, 8, 2);
    const AggregateH agg = precompute(ch);
    const CVector phi = CVector::Random(8);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
        {
            const Complex c = cascade(ch, phi, j, k);
            const double a = std::norm(c);
            const double b = std::norm(agg.at(j, k).dot(phi.conjugate()));
            CHECK(std::abs(a - b) <= 1e-12 * a);
            const Complex t = agg.at(j, k).transpose() * phi;
            CHECK(std::abs(c - t) <= 1e-12 * std::abs(c));
        }
}

TEST_CASE("the literal phi^H hbar rewrite is not the cascade for complex phi")
{
    // g = (1, 1), h = (1, i), phi = (1, i): g^H diag(phi) h = 1 + i*i = 0, but |phi^H hbar| = 2
    ChannelSet ch;
    CVector h(2), g(2), phi(2);
    h << 1, Complex(0, 1);
    g << 1, 1;
    phi << 1, Complex(0, 1);
    ch.h = {h};
    ch.g = {g};
    CHECK(std::abs(cascade(ch, phi, 0, 0)) < 1e-15);
    CHECK(std::abs(phi.dot(precompute(ch).at(0, 0))) == Approx(2.0));
}

TEST_CASE("scalar SINR")
{
    const ChannelSet ch = scalar_channels(1.0, 1.0);
    const PhaseProfile one(CVector::Ones(1), 1);
    CHECK(sinr_direct(ch, one, powers({1.0}), 1.0, 0) == Approx(1.0));
    const PhaseProfile zero(CVector::Zero(1), 1);
    CHECK(sinr_direct(ch, zero, powers({1.0}), 1.0, 0) == 0.0);
}

TEST_CASE("zero phases give zero SINR for every pair")
{
    const ChannelSet ch = verify::random_channels(3, 6, 3);
    const RVector s = sinr_direct_all(ch, PhaseProfile(CVector::Zero(6), 2), powers({1, 1, 1}), 0.1);
    CHECK(s.maxCoeff() == 0.0);
}

TEST_CASE("direct and quadratic SINR agree on a random K=2, N=4 instance")
{
    const ChannelSet ch = verify::random_channels(2, 4, 4);
    const CVector phi = CVector::Random(4);
    const PowerAllocation p = powers({0.3, 0.9});
    const RVector d = sinr_direct_all(ch, PhaseProfile(phi, 1), p, 0.2);
    CMatrix pb(4, 2);
    for (int k = 0; k < 2; ++k)
        pb.col(k) = std::sqrt(p.p[k]) * phi.conjugate();
    const RVector q = sinr_quadratic(precompute(ch), pb, 0.2);
    const auto ref = verify::sinr_reference(ch, phi, p.p, 0.2);
    for (int k = 0; k < 2; ++k)
    {
        CHECK(std::abs(d[k] - q[k]) <= 1e-10 * d[k]);
        CHECK(std::abs(d[k] - ref[k]) <= 1e-10 * d[k]);
    }
}

TEST_CASE("quadratic SINR special cases")
{
    const ChannelSet ch = verify::random_channels(2, 3, 5);
    const AggregateH agg = precompute(ch);
    CHECK(sinr_quadratic(agg, CMatrix::Zero(3, 2), 1.0).maxCoeff() == 0.0);

    const ChannelSet one = verify::random_channels(1, 3, 6);
    const AggregateH a1 = precompute(one);
    const CMatrix pb = CMatrix::Random(3, 1);
    CHECK(sinr_quadratic(a1, pb, 0.5)[0] == Approx(std::norm(a1.at(0, 0).dot(pb.col(0))) / 0.5));
}

TEST_CASE("global phase rotation leaves SINR unchanged")
{
    const ChannelSet ch = verify::random_channels(3, 6, 7);
    const CVector phi = CVector::Random(6);
    const PowerAllocation p = powers({0.5, 0.2, 0.7});
    const RVector a = sinr_direct_all(ch, PhaseProfile(phi, 2), p, 0.3);
    const RVector b = sinr_direct_all(ch, PhaseProfile(phi * std::polar(1.0, 1.234), 2), p, 0.3);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(a[k] - b[k]) <= 1e-10 * a[k]);
}

TEST_CASE("single-pair SINR grows with power")
{
    const ChannelSet ch = verify::random_channels(1, 4, 8);
    const PhaseProfile phi(CVector::Ones(4), 2);
    double prev = -1.0;
    for (double p = 0.0; p <= 1.0; p += 0.1)
    {
        const double s = sinr_direct(ch, phi, powers({p}), 0.1, 0);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("sum rate")
{
    CHECK(sum_rate(RVector::Ones(2)) == Approx(2.0));
    CHECK(sum_rate(RVector::Zero(3)) == 0.0);
    CHECK(sum_rate(RVector::Constant(1, 3.0)) == Approx(2.0));
}

TEST_CASE("total power on the reference constants")
{
    const NetworkConfig c = reference_config();
    PowerAllocation p;
    p.p = RVector::Constant(5, 0.1);
    CHECK(std::abs(total_power(p, ModuleMask::all(10), c) - 2.70) <= 1e-12);

    PowerAllocation zero;
    zero.p = RVector::Zero(5);
    CHECK(total_power(zero, ModuleMask(10), c) == Approx(5 * (0.01 + 0.01)));

    const ModuleMask five = ModuleMask::from_indices(10, {0, 1, 2, 3, 4});
    CHECK(total_power(p, ModuleMask::all(10), c) - total_power(p, five, c) == Approx(5 * 20 * 0.01));
}

TEST_CASE("energy efficiency")
{
    CHECK(energy_efficiency(2.0, 2.0) == Approx(1.0));
    CHECK(energy_efficiency(0.0, 3.0) == 0.0);
    CHECK_THROWS_AS(energy_efficiency(1.0, 0.0), std::domain_error);
    const NetworkConfig c = reference_config();
    PowerAllocation p;
    p.p = RVector::Constant(5, 0.1);
    CHECK(energy_efficiency(3.0, total_power(p, ModuleMask::all(10), c)) <
          energy_efficiency(3.0, total_power(p, ModuleMask::from_indices(10, {0}), c)));
}
