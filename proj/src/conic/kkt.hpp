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

#include "cones.hpp"

#include <Eigen/LU>
#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include <tuple>
#include <vector>

namespace irsra::conic::detail {

/*!
Solves the scaled KKT system

    [ 0  A'  G'   ] [dx]   [rx]
    [ A  0   0    ] [dy] = [ry]
    [ G  0  -W'W  ] [dz]   [rz]

by eliminating dz and working with H = G' W^{-2} G. Small problems form H
densely. Larger ones split H = S + U C U' where S collects the cones whose
contribution is block-diagonal and U C U' the few cones with dense rows, and
apply H^{-1} through the Woodbury identity. Equalities are handled by a
Schur complement; each solve is refined against the full system.
*/
class KktSolver
{
public:
    explicit KktSolver(const StandardForm &form);

    /// False if the system could not be factored.
    bool factor(const Scaling &w);
    bool solve(const Scaling &w, const RVector &rx, const RVector &ry, const RVector &rz, RVector &dx, RVector &dy,
               RVector &dz);

    bool uses_split() const { return split_; }

private:
    enum class Kind
    {
        small,     // dense block of a handful of variables added to S
        block,     // rows select distinct variables: the whole scaled block goes into S
        selection, // every row selects one variable: diagonal in S plus rank two
        dense      // all rows go to the low-rank part
    };

    struct ConeInfo
    {
        bool lp = false;
        int index = 0; // LP row, or SOC number
        int start = 0; // first row in G
        int dim = 1;
        Kind kind = Kind::small;
        std::vector<int> vars; // touched variables (small kind)
        std::vector<int> nonzero_rows; // rows of G with entries (dense kind)
        std::vector<std::tuple<int, int, double>> picks; // (row in cone, variable, coefficient), block kind
    };

    void s_solve(Eigen::Ref<RMatrix> x) const;
    void apply_h_inv(const RVector &r, RVector &out) const;
    void solve_once(const Scaling &w, const RVector &rx, const RVector &ry, const RVector &rz, RVector &dx, RVector &dy,
                    RVector &dz) const;
    void solve_reduced(const RVector &r1, const RVector &r2, RVector &dx, RVector &dy) const;

    bool factor_dense(const Scaling &w);
    bool factor_split(const Scaling &w);

    const StandardForm &form_;
    std::vector<ConeInfo> info_;
    bool split_ = false;
    double reg_ = 0.0;

    // dense path
    Eigen::LDLT<RMatrix> dense_ldlt_;
    // split path
    std::vector<std::vector<int>> block_vars_; // variables of each dense block of S
    std::vector<int> block_of_, local_of_;
    std::vector<RMatrix> s_blocks_;
    std::vector<Eigen::LLT<RMatrix>> s_llt_;
    Eigen::SparseMatrix<double> u_;
    RMatrix si_u_;
    RMatrix core_;
    Eigen::PartialPivLU<RMatrix> cap_lu_;
    int rank_ = 0;
    // equalities
    RMatrix z_;
    Eigen::LDLT<RMatrix> schur_;
};

} // namespace irsra::conic::detail
