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

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsra {

struct SparsityParams
{
    double delta = 1.0;
    double alpha = 1.0 / 1.01;
    double gamma_lo = 0.0; // known feasible target, 0 when unknown
    double gamma_hi = 0.0; // known infeasible target, 0 = find by doubling from 1
    double gamma_tol = 1e-3;           // stop when hi - lo <= gamma_tol * hi
    double block_threshold_rel = 1e-4; // module active iff norm > this * max norm
    conic::SolverSettings solver;

    /// delta with alpha = alpha_from_delta(delta).
    static SparsityParams from_delta(double delta);
};

/// alpha = 1 / (delta + 0.01). Throws std::invalid_argument for delta <= 0.
double alpha_from_delta(double delta);

/// -0.005 + 0.5 sqrt(1e-4 + sqrt(16 M K N max_k p_max_k)); beyond this budget
/// the weighted norm constraint can no longer bind.
double delta_upper_bound(const NetworkConfig &config);

/*!
Group-sparse feasibility problem for SINR target gamma.

Variables: real embedding of vec(Phi_bar) (column k, element n at complex
index k*N + n), followed by M epigraph scalars t_m at 2NK + m.

    minimize    alpha * sum_m t_m
    subject to  ||Phi_bar^m||_F <= t_m                                   (each m)
                ||[hbar_{j,k}^H phi_bar_j]_j ; 1|| <= sqrt(1 + 1/gamma) Re(hbar_{k,k}^H phi_bar_k)
                Im(hbar_{k,k}^H phi_bar_k) = 0                           (each k)
                |phi_bar_{k,n}| <= sqrt(p_max_k)                         (each k, n)

where the cascades are divided by the noise amplitude sigma, which leaves
the feasible set unchanged and keeps the data well scaled.
Throws std::invalid_argument for gamma <= 0.
*/
conic::ConicProblem build_p3(const AggregateH &aggregate, const NetworkConfig &config, double gamma,
                             const SparsityParams &params);

/// Extracts Phi_bar (N x K) from a solution vector of build_p3.
CMatrix extract_phi_bar(const RVector &x, int N, int K);

struct FeasibilityResult
{
    conic::SolveStatus status = conic::SolveStatus::numerical_failure;
    double value = 0.0; // alpha * ||Phi_bar||_{1,F}; +inf unless status is optimal
    SparseSolution solution;
    bool feasible(double delta) const { return status == conic::SolveStatus::optimal && value <= delta; }
};

/// Raised when the conic solver reports numerical_failure.
class SolverFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/*!
Memo of group-sparse solves for one channel realization. The minimizer does not
depend on alpha (alpha only scales the objective), so the unweighted norm
and minimizer at each gamma can be shared across every delta.
*/
class FeasibilityCache
{
public:
    struct Entry
    {
        conic::SolveStatus status = conic::SolveStatus::numerical_failure;
        double norm = 0.0; // ||Phi_bar||_{1,F}
        CMatrix phi_bar;
        int iterations = 0;
    };

    const Entry *find(double gamma) const;
    const Entry &insert(double gamma, Entry e);
    const std::map<double, Entry> &entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    int solves() const { return solves_; }
    void count_solve() { ++solves_; }

private:
    std::map<double, Entry> entries_;
    int solves_ = 0;
};

/// Solves the group-sparse problem at gamma. Throws SolverFailure on numerical_failure.
FeasibilityResult feasibility_value(const AggregateH &aggregate, const NetworkConfig &config, double gamma,
                                    const SparsityParams &params, FeasibilityCache *cache = nullptr);

struct BisectionStep
{
    double gamma = 0.0;
    double value = 0.0;
    bool feasible = false;
    conic::SolveStatus status = conic::SolveStatus::numerical_failure;
    RVector block_norms;
};

/// Raised when gamma_hi reaches 2^40 while still feasible.
class BracketFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/*!
Largest gamma (within gamma_tol relative) with group-sparse value <= delta, and the
Phi_bar found there. The upper end is doubled from 1 when not given. With a
cache, targets already solved narrow the bracket first. A
max_iterations termination counts as "not shown feasible". If no positive
gamma is found feasible before the bracket falls below 1e-12, the returned
solution has gamma = 0 and an all-zero Phi_bar.
*/
SparseSolution bisect_gamma(const AggregateH &aggregate, const NetworkConfig &config, const SparsityParams &params,
                            FeasibilityCache *cache = nullptr, std::vector<BisectionStep> *trace = nullptr);

/// CSV debug dump: step, gamma, value, feasible, status, block_norm_1..M.
void write_bisection_trace(std::ostream &out, const std::vector<BisectionStep> &steps);

struct ModuleSelection
{
    ModuleMask mask;
    bool degenerate = false; // Phi_bar was all zero
};

/// Module m is active iff block_norms[m] > eps * max norm; with a budget Q the
/// Q largest are kept, ties going to the lower index.
ModuleSelection identify_modules(const SparseSolution &solution, const NetworkConfig &config,
                                 const SparsityParams &params);

} // namespace irsra
