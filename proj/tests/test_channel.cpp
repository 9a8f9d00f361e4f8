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

#include "irsra/channel.hpp"
#include "irsra/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace irsra;
using Catch::Approx;

TEST_CASE("terminal placement is deterministic and inside the discs")
{
    const NetworkConfig c = reference_config();
    const Geometry a = place_terminals(c, 42);
    const Geometry b = place_terminals(c, 42);
    REQUIRE(a.st_positions.size() == 5);
    for (int k = 0; k < c.K; ++k)
    {
        CHECK(a.st_positions[k].x == b.st_positions[k].x);
        CHECK(a.dt_positions[k].y == b.dt_positions[k].y);
        CHECK(distance(a.st_positions[k], c.geometry.st_center) <= c.geometry.cluster_radius);
        CHECK(distance(a.dt_positions[k], c.geometry.dt_center) <= c.geometry.cluster_radius);
    }
}

TEST_CASE("zero radius puts every terminal at its center")
{
    NetworkConfig c = reference_config();
    c.geometry.cluster_radius = 0.0;
    const Geometry g = place_terminals(validate(c), 3);
    for (int k = 0; k < c.K; ++k)
    {
        CHECK(g.st_positions[k].x == 0.0);
        CHECK(g.st_positions[k].y == 0.0);
        CHECK(g.dt_positions[k].x == 200.0);
        CHECK(g.dt_positions[k].y == 0.0);
    }
}

TEST_CASE("uniform disc: mean distance from center is 2R/3")
{
    NetworkConfig c = reference_config();
    c.K = 1;
    c.p_max_w = {0.1};
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        sum += distance(place_terminals(c, static_cast<std::uint64_t>(i)).st_positions[0], c.geometry.st_center);
    CHECK(sum / n == Approx(4.0 / 3.0).epsilon(0.01));
}

TEST_CASE("path gain")
{
    CHECK(path_gain(1.0, 2.0, 30.0) == Approx(1e-3).epsilon(1e-14));
    CHECK(path_gain(1.0, 3.5, 30.0) == Approx(1e-3).epsilon(1e-14));
    CHECK(path_gain(100.0, 2.0, 30.0) == Approx(1e-7).epsilon(1e-14));
    // independent evaluation: 1e-3 * exp(-2.1 ln 130)
    CHECK(path_gain(130.0, 2.1, 30.0) == Approx(1e-3 * std::exp(-2.1 * std::log(130.0))).epsilon(1e-13));
    CHECK(path_gain(0.5, 2.0, 30.0) == Approx(1e-3)); // clamped to 1 m
    CHECK_THROWS_AS(path_gain(0.0, 2.0, 30.0), std::domain_error);
    CHECK_THROWS_AS(path_gain(-1.0, 2.0, 30.0), std::domain_error);
}

TEST_CASE("channel shapes follow the module layout")
{
    const NetworkConfig c = reference_config();
    const ChannelSet ch = draw_channels(c, place_terminals(c, 1), 1);
    CHECK(ch.K() == 5);
    CHECK(ch.N() == 200);
    CHECK(ch.direct.rows() == 5);
    CHECK(block_view(ch.h[0], 9, c.L).size() == 20);
}

TEST_CASE("channels are a pure function of the seed")
{
    const NetworkConfig c = reference_config();
    const Geometry g = place_terminals(c, 9);
    const ChannelSet a = draw_channels(c, g, 9);
    const ChannelSet b = draw_channels(c, g, 9);
    for (int k = 0; k < c.K; ++k)
    {
        CHECK(a.h[k] == b.h[k]);
        CHECK(a.g[k] == b.g[k]);
    }
    CHECK(a.direct == b.direct);
    const ChannelSet other = draw_channels(c, g, 10);
    CHECK(other.h[0] != a.h[0]);
}

TEST_CASE("channel entry statistics match the assigned variance")
{
    NetworkConfig c = reference_config();
    c.K = 1;
    c.M = 1;
    c.L = 1;
    c.N = 1;
    c.p_max_w = {0.1};
    c.geometry.cluster_radius = 0.0;
    c = validate(c);
    const Geometry g = place_terminals(c, 0);
    const double var = path_gain(distance(g.st_positions[0], c.geometry.irs_position), 2.0, 30.0);
    const int n = 100000;
    double s2 = 0.0, sre2 = 0.0, sim2 = 0.0, cross = 0.0;
    Complex mean = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const Complex x = draw_channels(c, g, static_cast<std::uint64_t>(i)).h[0][0];
        mean += x;
        s2 += std::norm(x);
        sre2 += x.real() * x.real();
        sim2 += x.imag() * x.imag();
        cross += x.real() * x.imag();
    }
    CHECK(s2 / n == Approx(var).epsilon(0.02));
    // mean within 3 standard errors
    CHECK(std::abs(mean / double(n)) < 3.0 * std::sqrt(var / n));
    CHECK(sre2 / sim2 == Approx(1.0).epsilon(0.03));
    // E[re*im] = 0 with sd var/2 per sample
    CHECK(std::abs(cross / n) < 5.0 * (var / 2.0) / std::sqrt(double(n)));
}

TEST_CASE("ratio200 variance model")
{
    NetworkConfig c = reference_config();
    c.variance_model = VarianceModel::ratio200;
    CHECK(link_variance(c, 100.0, 2.0) == Approx(4.0));
    c.variance_model = VarianceModel::reference_loss;
    CHECK(link_variance(c, 100.0, 2.0) == Approx(1e-7));
}

TEST_CASE("substream seeds are order independent")
{
    const auto a = derive_seed(5, {1, 2});
    const auto b = derive_seed(5, {1, 2});
    CHECK(a == b);
    CHECK(derive_seed(5, {2, 1}) != a);
    RandomStream r1(a), r2(a);
    CHECK(r1.uniform() == r2.uniform());
}

TEST_CASE("channel dump format")
{
    NetworkConfig c = reference_config();
    c.K = 1;
    c.M = 1;
    c.L = 2;
    c.N = 2;
    c.p_max_w = {0.1};
    const ChannelSet ch = draw_channels(validate(c), place_terminals(c, 1), 1);
    std::ostringstream s;
    write_channel_csv_header(s);
    write_channel_csv(s, 0, ch);
    const std::string out = s.str();
    CHECK(out.rfind("realization,pair,link,element,re,im\r\n", 0) == 0);
    // 2 h + 2 g + 1 direct rows plus the header
    CHECK(std::count(out.begin(), out.end(), '\n') == 6);
}
