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

// Independent reference computations used by tests, the acceptance binary
// and `irsra check`. Nothing here calls the conic solver.

#include "irsra/conic.hpp"
#include "irsra/model.hpp"

#include <cstdint>
#include <vector>

namespace irsra::verify {

/// Random complex channels with unit-variance entries (no geometry).
ChannelSet random_channels(int K, int N, std::uint64_t seed);

/// Loop-based SINR straight from the signal model, no Eigen reductions.
std::vector<double> sinr_reference(const ChannelSet &channels, const CVector &phi, const RVector &p, double sigma2);

struct GridResult
{
    bool feasible = false;
    double value = 0.0;
    RVector x;
};

/*!
Minimizes a small conic problem (all variables boxed, no equalities) by a
nested coordinate search: for each coordinate in turn a `points`-grid scan
over its bounds, then golden-section refinement down to `resolution`, with
the remaining coordinates minimized inside. Exact in the limit because the
penalized objective has convex sublevel sets.
*/
GridResult grid_search(const conic::ConicProblem &problem, int points = 11, double resolution = 1e-6);

/// Random bounded SOCP with n variables in [-1, 1] and up to three cones, built
/// around an interior point so it is always feasible.
conic::ConicProblem random_tiny_socp(int n, std::uint64_t seed);

/// p_max (sum over active n of |g_n||h_n|)^2 / sigma2 for a single pair.
double single_pair_optimum(const ChannelSet &channels, const ModuleMask &mask, int L, double p_max, double sigma2);

/// Best min-SINR over a grid of (p1, p2) in [0, p_max]^2 with `steps` cells per side.
struct PowerGridResult
{
    double best = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};
PowerGridResult power_grid_2pair(const RMatrix &gains, const std::vector<double> &p_max, double sigma2, int steps);

/// Best min-SINR over `samples` random unit-modulus phases on the mask and powers in the box.
double random_sampling_best(const ChannelSet &channels, const ModuleMask &mask, const NetworkConfig &config,
                            int samples, std::uint64_t seed);

/// Every subset of {0..M-1} with cardinality in [lo, hi].
std::vector<ModuleMask> enumerate_subsets(int M, int lo, int hi);

} // namespace irsra::verify
