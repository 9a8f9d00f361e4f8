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
#include "irsra/channel.hpp"

#include "irsra/csv.hpp"
#include "irsra/random.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace irsra {

namespace {

Point uniform_in_disc(RandomStream &rng, const Point &center, double radius)
{
    const double r = radius * std::sqrt(rng.uniform());
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    return {center.x + r * std::cos(a), center.y + r * std::sin(a)};
}

CVector gaussian_vector(std::uint64_t seed, int n, double variance)
{
    RandomStream rng(seed);
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.complex_gaussian(variance);
    return v;
}

} // namespace

Geometry place_terminals(const NetworkConfig &config, std::uint64_t seed)
{
    Geometry geo;
    geo.irs_position = config.geometry.irs_position;
    for (int k = 0; k < config.K; ++k)
    {
        const auto uk = static_cast<std::uint64_t>(k);
        RandomStream st(derive_seed(seed, {uk, tag(StreamTag::st_position)}));
        RandomStream dt(derive_seed(seed, {uk, tag(StreamTag::dt_position)}));
        geo.st_positions.push_back(uniform_in_disc(st, config.geometry.st_center, config.geometry.cluster_radius));
        geo.dt_positions.push_back(uniform_in_disc(dt, config.geometry.dt_center, config.geometry.cluster_radius));
    }
    return geo;
}

double path_gain(double distance_m, double exponent, double ref_loss_db)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("path_gain: distance must be positive");
    const double d = std::max(distance_m, 1.0);
    return std::pow(10.0, -ref_loss_db / 10.0) * std::pow(d, -exponent);
}

double link_variance(const NetworkConfig &config, double distance_m, double exponent)
{
    if (config.variance_model == VarianceModel::ratio200)
    {
        if (!(distance_m > 0.0))
            throw std::domain_error("link_variance: distance must be positive");
        return std::pow(200.0 / distance_m, exponent);
    }
    return path_gain(distance_m, exponent, config.ref_loss_db);
}

ChannelSet draw_channels(const NetworkConfig &config, const Geometry &geo, std::uint64_t seed)
{
    const int K = config.K;
    ChannelSet ch;
    ch.h.reserve(static_cast<std::size_t>(K));
    ch.g.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        const auto uk = static_cast<std::uint64_t>(k);
        const auto &st = geo.st_positions[static_cast<std::size_t>(k)];
        const auto &dt = geo.dt_positions[static_cast<std::size_t>(k)];
        const double vh = link_variance(config, distance(st, geo.irs_position), config.exponents.st_irs);
        const double vg = link_variance(config, distance(geo.irs_position, dt), config.exponents.irs_dt);
        ch.h.push_back(gaussian_vector(derive_seed(seed, {uk, tag(StreamTag::uplink)}), config.N, vh));
        ch.g.push_back(gaussian_vector(derive_seed(seed, {uk, tag(StreamTag::downlink)}), config.N, vg));
    }
    ch.direct.resize(K, K);
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
        {
            const double v = link_variance(config,
                                           distance(geo.st_positions[static_cast<std::size_t>(j)],
                                                    geo.dt_positions[static_cast<std::size_t>(k)]),
                                           config.exponents.direct);
            RandomStream rng(derive_seed(seed, {static_cast<std::uint64_t>(j * K + k), tag(StreamTag::direct)}));
            ch.direct(j, k) = rng.complex_gaussian(v);
        }
    return ch;
}

void write_channel_csv_header(std::ostream &out)
{
    write_csv_row(out, {"realization", "pair", "link", "element", "re", "im"});
}

void write_channel_csv(std::ostream &out, int realization, const ChannelSet &ch)
{
    const auto r = std::to_string(realization);
    auto emit = [&](int pair, const char *link, Eigen::Index element, Complex v) {
        write_csv_row(out, {r, std::to_string(pair), link, std::to_string(element), format_double(v.real()),
                            format_double(v.imag())});
    };
    for (int k = 0; k < ch.K(); ++k)
        for (Eigen::Index n = 0; n < ch.h[static_cast<std::size_t>(k)].size(); ++n)
            emit(k, "h", n, ch.h[static_cast<std::size_t>(k)][n]);
    for (int k = 0; k < ch.K(); ++k)
        for (Eigen::Index n = 0; n < ch.g[static_cast<std::size_t>(k)].size(); ++n)
            emit(k, "g", n, ch.g[static_cast<std::size_t>(k)][n]);
    for (Eigen::Index j = 0; j < ch.direct.rows(); ++j)
        for (Eigen::Index k = 0; k < ch.direct.cols(); ++k)
            emit(static_cast<int>(j), "d", k, ch.direct(j, k));
}

} // namespace irsra
