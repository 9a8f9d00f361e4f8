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

#include "irsra/conic.hpp"
#include "irsra/metrics.hpp"
#include "irsra/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace irsra {

struct AltOptTraceRow
{
    int iteration = 0;
    std::string step; // init, phase, power
    double gamma_out = 0.0;
    double min_sinr_true = 0.0;
    std::string solver_status;
};

struct AltOptState
{
    PhaseProfile phases;
    PowerAllocation powers;
    double gamma_out = 0.0; // min_k SINR_k(phases, powers)
    int iteration = 0;
    std::vector<double> history; // gamma_out after init and after each outer iteration
    std::vector<AltOptTraceRow> trace;
    bool flagged = false; // some subproblem failed and the step was skipped
    double trust = 1.0;   // blend factor towards the subproblem solution
    int rejections = 0;   // consecutive rejected steps
};

struct AltOptSettings
{
    double tol = 1e-4;
    int max_outer = 100;
    int max_power_inner = 50;
    double accept_slack = 1e-6; // relative drop tolerated before a step is rejected
    int max_joint = 30;         // joint trust-region solves per stall
    conic::SolverSettings solver;
};

/// p = p_max / 2, unit-modulus phases with seeded uniform angles on the
/// active modules and zero elsewhere. Throws std::invalid_argument for an
/// empty mask.
AltOptState init_state(const ChannelSet &channels, const ModuleMask &mask, const NetworkConfig &config,
                       std::uint64_t seed);

/// Minimum true SINR of a (phases, powers) pair.
double min_sinr(const ChannelSet &channels, const PhaseProfile &phases, const PowerAllocation &powers,
                double sigma2);

/*!
One partially linearized phase update at (phi, gamma_out) with the powers
fixed. With a_k = sqrt(p_k) hbar_{k,k} / sigma, b_{j,k} = sqrt(p_j) hbar_{j,k} / sigma,
s_k = a_k^H phi and v_k = 1 + sum_{j != k} |b_{j,k}^H phi|^2 at the current point,

    maximize gamma
    s.t. g sum_{j != k} |b_{j,k}^H x|^2 <= 2 Re(conj(s_k) a_k^H x) - |s_k|^2 - g - gamma v_k + g v_k
         |x_n| <= 1 on active elements, x_n = 0 elsewhere

with g the current gamma_out. Any solution has true min-SINR >= g. The blend
phi + trust (x - phi) is accepted unless the true min-SINR drops by more
than accept_slack (relative); a rejection halves the trust factor.
Returns false when the step was rejected or the solver failed.
*/
bool phase_step(AltOptState &state, const ChannelSet &channels, const AggregateH &aggregate,
                const NetworkConfig &config, const ModuleMask &mask, const AltOptSettings &settings = {});

/*!
Max-min SINR power control for a fixed gain matrix G(j, k) (ST j -> DT k).
Iterates the partially linearized linear program in x = p / p_max,

    maximize gamma  s.t.  x_k Gt_kk - g (sum_{j != k} x_j Gt_jk + 1) - (gamma - g) D_k >= 0,  0 <= x <= 1

with Gt_jk = G_jk p_max_j / sigma2, g the current min-SINR and D_k the
current interference-plus-noise, until gamma stalls. Starts from p0.
`status` receives the last solver status.
*/
RVector optimize_powers(const RMatrix &gains, const std::vector<double> &p_max, double sigma2, const RVector &p0,
                        const AltOptSettings &settings, conic::SolveStatus *status = nullptr);

/// Power update with the phases fixed; same acceptance rule as phase_step.
bool power_step(AltOptState &state, const ChannelSet &channels, const NetworkConfig &config,
                const AltOptSettings &settings = {});

/*!
One trust-region step in phases and powers together: every SINR constraint
is linearized in (conj(phi), p / p_max) around the current point, changes are
capped at `radius` per real coordinate, |phi_n| <= 1 is kept exactly, and the
result is accepted only if the true min-SINR increases.
*/
bool joint_step(AltOptState &state, const ChannelSet &channels, const AggregateH &aggregate,
                const NetworkConfig &config, const ModuleMask &mask, double radius,
                const AltOptSettings &settings = {});

/// Alternates phase_step and power_step until the relative change of
/// gamma_out drops below tol or three consecutive steps are rejected. At
/// such a stall, joint steps with a shrinking radius are tried; alternation
/// resumes if they gained more than tol, otherwise the run ends. At most
/// max_outer rounds.
AltOptState algorithm1(const ChannelSet &channels, const ModuleMask &mask, const NetworkConfig &config,
                       std::uint64_t seed, const AltOptSettings &settings = {});

/// CSV: iteration, step, gamma_out, min_sinr_true, solver_status.
void write_altopt_trace(std::ostream &out, const AltOptState &state);

} // namespace irsra
