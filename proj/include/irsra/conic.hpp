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

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace irsra::conic {

/// Sparse real row stored as (column, value) pairs. Duplicate columns add up.
struct SparseRow
{
    std::vector<std::pair<int, double>> terms;

    SparseRow &add(int col, double value)
    {
        if (value != 0.0)
            terms.emplace_back(col, value);
        return *this;
    }
    double dot(const RVector &x) const;
    bool empty() const { return terms.empty(); }
};

/// ||A x + b||_2 <= c_row . x + d. A is stored row by row; a constraint with no
/// rows is the half-space c_row . x + d >= 0.
struct SocConstraint
{
    std::vector<SparseRow> a;
    std::vector<double> b;
    SparseRow c_row;
    double d = 0.0;

    /// Appends one row of A with offset entry b_i.
    SparseRow &add_row(double offset = 0.0)
    {
        a.emplace_back();
        b.push_back(offset);
        return a.back();
    }
};

/// row . x = rhs
struct EqConstraint
{
    SparseRow row;
    double rhs = 0.0;
};

/*!
Minimize objective . x over x in R^n subject to second-order-cone
constraints, linear equalities and optional per-variable bounds.
Immutable once handed to solve().
*/
struct ConicProblem
{
    explicit ConicProblem(int n = 0);

    int n_vars = 0;
    RVector objective;
    std::vector<SocConstraint> soc_constraints;
    std::vector<EqConstraint> eq_constraints;
    RVector lower; // -inf when absent
    RVector upper; // +inf when absent

    SocConstraint &add_soc() { return soc_constraints.emplace_back(); }
    void add_eq(SparseRow row, double rhs) { eq_constraints.push_back({std::move(row), rhs}); }
    /// Half-space row . x + d >= 0.
    void add_halfspace(SparseRow row, double d);
    void set_bounds(int i, double lo, double hi);

    /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
    void check() const;
};

enum class SolveStatus
{
    optimal,
    infeasible,
    max_iterations,
    numerical_failure
};

std::string to_string(SolveStatus s);

struct SolveReport
{
    SolveStatus status = SolveStatus::numerical_failure;
    RVector x;
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    double max_primal_residual = std::numeric_limits<double>::infinity();
    double max_cone_violation = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string message;
};

struct SolverSettings
{
    double tol_feas = 1e-7;
    double tol_gap = 1e-7;
    int max_iter = 100;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and Mehrotra correction. `optimal` is only
/// reported after check_point() confirms feasibility of the returned x;
/// `infeasible` only after a dual improving ray is verified independently.
SolveReport solve(const ConicProblem &problem, const SolverSettings &settings = {});

/// Independent feasibility check of a point.
struct PointCheck
{
    double max_primal_residual = 0.0; // equalities and bounds, absolute
    double max_cone_violation = 0.0;  // max(0, ||Ax+b|| - (c.x + d)), absolute
};
PointCheck check_point(const ConicProblem &problem, const RVector &x);

/*!
Complex-to-real embedding of a complex vector of length v_len whose real
variables start at `offset`: entry i maps to (re at offset+2i, im at offset+2i+1).
*/
class ComplexEmbedding
{
public:
    explicit ComplexEmbedding(int v_len, int offset = 0) : len_(v_len), offset_(offset) {}

    int length() const { return len_; }
    int n_real() const { return 2 * len_; }
    int re(int i) const { return offset_ + 2 * i; }
    int im(int i) const { return offset_ + 2 * i + 1; }

    /// Row for Re(a^H x) (scaled by `scale`), appended to `row`.
    void add_re_inner(SparseRow &row, const CVector &a, double scale = 1.0) const;
    /// Row for Im(a^H x) (scaled by `scale`), appended to `row`.
    void add_im_inner(SparseRow &row, const CVector &a, double scale = 1.0) const;
    /// Cone |x_i| <= radius.
    SocConstraint magnitude_cap(int i, double radius) const;

    /// Reads the complex vector back out of a real solution.
    CVector extract(const RVector &x) const;

private:
    int len_;
    int offset_;
};

/*!
Plain-text interchange dump, one record per line:

    conic 1
    vars <n>
    obj <i> <c_i>                      (nonzero objective entries)
    bound <i> <lo> <hi>                (finite bounds only)
    soc <rows> <d>                     followed by
      c <j> <v>                        (c_row entries)
      row <r> <b_r>                    then for each row r
        a <j> <v>
    eq <rhs>                           followed by
      e <j> <v>
    end

Numbers use shortest round-trip formatting; indices are 0-based.
*/
void write_problem(std::ostream &out, const ConicProblem &problem);
ConicProblem read_problem(std::istream &in);

} // namespace irsra::conic
