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
#pragma once

#include "irsra/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace irsra {

struct Geometry
{
    std::vector<Point> st_positions;
    std::vector<Point> dt_positions;
    Point irs_position;
};

/// K STs uniform on the ST disc and K DTs uniform on the DT disc (r = R*sqrt(u)).
/// ST k draws from substream (seed, k, st_position), DT k from (seed, k, dt_position).
Geometry place_terminals(const NetworkConfig &config, std::uint64_t seed);

/// Linear power gain 10^(-ref_loss_db/10) * d^(-exponent); d below 1 m is clamped to 1 m.
/// Throws std::domain_error for a non-positive distance.
double path_gain(double distance_m, double exponent, double ref_loss_db);

/// Per-entry variance of a link under the configured variance model.
double link_variance(const NetworkConfig &config, double distance_m, double exponent);

/*!
Rayleigh channels for one realization.

    h_k entries ~ CN(0, v(d(ST k, IRS), st_irs))      substream (seed, k, uplink)
    g_k entries ~ CN(0, v(d(IRS, DT k), irs_dt))      substream (seed, k, downlink)
    direct(j,k) ~ CN(0, v(d(ST j, DT k), direct))     substream (seed, j*K + k, direct)
*/
ChannelSet draw_channels(const NetworkConfig &config, const Geometry &geometry, std::uint64_t seed);

/// CSV rows (realization, pair, link, element, re, im). link is "h", "g", or "d";
/// for "d" the pair column is the ST index and element the DT index.
void write_channel_csv_header(std::ostream &out);
void write_channel_csv(std::ostream &out, int realization, const ChannelSet &channels);

} // namespace irsra
