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

#include <Eigen/SparseCore>

#include <vector>

namespace irsra::conic::detail {

/// Cone rows: n_lp nonnegative rows first, then second-order cones.
struct ConeLayout
{
    int n_lp = 0;
    std::vector<int> soc_start;
    std::vector<int> soc_dim;
    int total = 0;

    int n_soc() const { return static_cast<int>(soc_dim.size()); }
    int degree() const { return n_lp + n_soc(); }
};

using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// min c.x  s.t.  A x = b,  G x + s = h,  s in K.
struct StandardForm
{
    int n = 0;
    int p = 0;
    SpMatRow A;
    SpMatRow G;
    RVector c;
    RVector b;
    RVector h;
    ConeLayout cones;
};

struct SocScaling
{
    double eta = 1.0;
    RVector wbar; // unit hyperbolic norm: wbar' J wbar = 1
};

/// Nesterov-Todd scaling W with W z = W^{-1} s = lambda.
struct Scaling
{
    RVector lp_w; // sqrt(s / z)
    std::vector<SocScaling> soc;
    RVector lambda;
};

Scaling identity_scaling(const ConeLayout &k);
/// Returns false if s or z is not strictly interior.
bool compute_scaling(const ConeLayout &k, const RVector &s, const RVector &z, Scaling &out);

void apply_w(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out);
void apply_w_inv(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out);
/// out = W^{-2} in
void apply_w2_inv(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out);

/// Jordan product u o v.
void jordan_product(const ConeLayout &k, const RVector &u, const RVector &v, RVector &out);
/// Solves lambda o out = d.
void jordan_divide(const ConeLayout &k, const RVector &lambda, const RVector &d, RVector &out);

/// Adds `scale` times the cone identity e.
void add_identity(const ConeLayout &k, RVector &v, double scale);

/// Smallest value m with v + m e in the closed cone (negative when v is interior).
double interior_deficit(const ConeLayout &k, const RVector &v);

/// Largest alpha with u + alpha du in the cone (u interior); +inf when unbounded.
double max_step(const ConeLayout &k, const RVector &u, const RVector &du);

/// Dense W^{-2} block of SOC i (dim x dim).
RMatrix soc_w2_inv(const SocScaling &sc);

} // namespace irsra::conic::detail
