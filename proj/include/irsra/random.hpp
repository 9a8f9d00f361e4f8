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
#include <initializer_list>
#include <random>

namespace irsra {

/*!
Substream derivation.

A substream seed is obtained by folding each tag into the parent seed with
the SplitMix64 finalizer:

    s <- splitmix64(s ^ splitmix64(tag + 0x9E3779B97F4A7C15))

for tag in order. Each substream then drives its own std::mt19937_64, so
results never depend on the order in which substreams are consumed.
*/
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// Fixed tags used when deriving substreams.
enum class StreamTag : std::uint64_t
{
    st_position = 1,
    dt_position = 2,
    uplink = 3,   // h_k
    downlink = 4, // g_k
    direct = 5,
    realization = 16,
    proposed = 32,
    mrs_subset = 33,
    mrs_phase = 34,
    init_phase = 35,
};

constexpr std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

/// Portable sampling on top of mt19937_64 (no reliance on library distributions).
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller (both outputs used).
    double normal();
    /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
    Complex complex_gaussian(double variance);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace irsra
