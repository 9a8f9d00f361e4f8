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

#include "irsra/config_json.hpp"
#include "irsra/model.hpp"

#include <cmath>

using namespace irsra;
using Catch::Approx;

TEST_CASE("validate accepts the reference scenario")
{
    const NetworkConfig c = validate(reference_config());
    CHECK(c.K == 5);
    CHECK(c.M == 10);
    CHECK(c.L == 20);
    CHECK(c.N == 200);
}

TEST_CASE("validate rejects N != M*L")
{
    NetworkConfig c = reference_config();
    c.N = 201;
    try
    {
        validate(c);
        FAIL("no error");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.kind() == ConfigError::Kind::dimension);
    }
}

TEST_CASE("validate rejects Q > M")
{
    NetworkConfig c = reference_config();
    c.Q = 11;
    try
    {
        validate(c);
        FAIL("no error");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.kind() == ConfigError::Kind::budget);
    }
    c.Q = 10;
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("validate rejects non-positive power or noise")
{
    NetworkConfig c = reference_config();
    c.sigma2_w = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = reference_config();
    c.p_max_w[2] = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("dBm conversion")
{
    CHECK(dbm_to_watts(20.0) == Approx(0.1).epsilon(1e-15));
    CHECK(dbm_to_watts(-90.0) == Approx(1e-12).epsilon(1e-15));
    CHECK(dbm_to_watts(10.0) == Approx(0.01).epsilon(1e-15));
    CHECK(watts_to_dbm(0.1) == Approx(20.0).epsilon(1e-15));
}

TEST_CASE("block_view slices and writes through")
{
    CVector v(4);
    v << 1, 2, 3, 4;
    auto b = block_view(v, 1, 2);
    CHECK(b[0] == Complex(3));
    CHECK(b[1] == Complex(4));
    CHECK(block_view(v, 0, 2)[0] == Complex(1));
    b[0] = 7;
    CHECK(v[2] == Complex(7));
    CHECK_THROWS_AS(block_view(v, 2, 2), std::out_of_range);
}

TEST_CASE("concatenated blocks round-trip")
{
    const int M = 5, L = 3;
    std::vector<CVector> blocks;
    CVector v(M * L);
    for (int m = 0; m < M; ++m)
    {
        blocks.push_back(CVector::Random(L));
        v.segment(m * L, L) = blocks.back();
    }
    CVector rebuilt(M * L);
    for (int m = 0; m < M; ++m)
    {
        CHECK(block_view(v, m, L) == blocks[static_cast<std::size_t>(m)]);
        rebuilt.segment(m * L, L) = block_view(v, m, L);
    }
    CHECK(rebuilt == v);
}

TEST_CASE("restricting a profile zeroes exactly the inactive blocks")
{
    const int M = 4, L = 2;
    PhaseProfile p(CVector::Constant(M * L, Complex(0.6, 0.8)), L);
    p.restrict_to(ModuleMask::from_indices(M, {0, 2}));
    for (int n = 0; n < M * L; ++n)
    {
        const bool active = n / L == 0 || n / L == 2;
        CHECK((p.phi()[n] != Complex(0)) == active);
    }
    CHECK(p.magnitudes_ok());
}

TEST_CASE("mask helpers")
{
    const ModuleMask m = ModuleMask::from_indices(5, {4, 1});
    CHECK(m.cardinality() == 2);
    CHECK(m.indices() == std::vector<int>{1, 4});
    CHECK(ModuleMask::all(3).cardinality() == 3);
    CHECK_THROWS(ModuleMask::from_indices(3, {3}));
}

TEST_CASE("config JSON round trip and unit handling")
{
    const NetworkConfig ref = reference_config();
    const NetworkConfig back = config_from_json(config_to_json(ref));
    CHECK(back.K == ref.K);
    CHECK(back.sigma2_w == Approx(ref.sigma2_w));
    CHECK(back.p_max_w == ref.p_max_w);

    nlohmann::json j = {{"K", 2}, {"M", 2}, {"L", 3}, {"N", 6}, {"p_max", {{"dbm", 20}}}, {"sigma2", {{"watts", 1e-9}}}};
    const NetworkConfig c = config_from_json(j);
    CHECK(c.p_max_w.size() == 2);
    CHECK(c.p_max_w[1] == Approx(0.1));
    CHECK(c.sigma2_w == Approx(1e-9));

    j["p_max"] = {{"dbm", 20}, {"watts", 0.1}};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j["p_max"] = nlohmann::json::object();
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
}
