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
#include "kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace irsra::conic::detail {

namespace {

constexpr int kSmallVars = 4;     // cones touching at most this many variables go into S densely
constexpr int kBlockVars = 600;   // selection cones up to this size are added to S as one block
constexpr Eigen::Index kDenseLimit = 100; // below this many variables H is formed densely
constexpr int kRefineSteps = 4;

using Triplet = Eigen::Triplet<double>;

} // namespace

KktSolver::KktSolver(const StandardForm &f) : form_(f)
{
    const auto &k = f.cones;
    auto row_nnz = [&](int r) { return static_cast<int>(f.G.outerIndexPtr()[r + 1] - f.G.outerIndexPtr()[r]); };
    auto row_vars = [&](int r, std::set<int> &vars) {
        for (SpMatRow::InnerIterator it(f.G, r); it; ++it)
            vars.insert(static_cast<int>(it.col()));
    };

    for (int i = 0; i < k.n_lp; ++i)
    {
        ConeInfo ci;
        ci.lp = true;
        ci.index = i;
        ci.start = i;
        ci.dim = 1;
        std::set<int> vars;
        row_vars(i, vars);
        if (static_cast<int>(vars.size()) <= kSmallVars)
        {
            ci.kind = Kind::small;
            ci.vars.assign(vars.begin(), vars.end());
        }
        else
        {
            ci.kind = Kind::dense;
            ci.nonzero_rows = {i};
        }
        info_.push_back(std::move(ci));
    }
    for (int c = 0; c < k.n_soc(); ++c)
    {
        ConeInfo ci;
        ci.index = c;
        ci.start = k.soc_start[static_cast<std::size_t>(c)];
        ci.dim = k.soc_dim[static_cast<std::size_t>(c)];
        std::set<int> vars;
        bool selection = true;
        for (int r = ci.start; r < ci.start + ci.dim; ++r)
        {
            row_vars(r, vars);
            if (row_nnz(r) > 1)
                selection = false;
            if (row_nnz(r) > 0)
                ci.nonzero_rows.push_back(r);
        }
        if (static_cast<int>(vars.size()) <= kSmallVars)
        {
            ci.kind = Kind::small;
            ci.vars.assign(vars.begin(), vars.end());
        }
        else
        {
            ci.kind = selection ? Kind::selection : Kind::dense;
            int picked = 0;
            for (int r = 0; r < ci.dim; ++r)
                picked += row_nnz(ci.start + r);
            // distinct variables per row: the scaled block maps one-to-one onto S
            if (selection && picked == static_cast<int>(vars.size()) && picked <= kBlockVars)
            {
                ci.kind = Kind::block;
                for (int r = 0; r < ci.dim; ++r)
                    for (SpMatRow::InnerIterator it(f.G, ci.start + r); it; ++it)
                        ci.picks.emplace_back(r, static_cast<int>(it.col()), it.value());
            }
        }
        info_.push_back(std::move(ci));
    }
    split_ = f.n > kDenseLimit;

    // Connected components of the block-diagonal part S; each becomes a dense block.
    std::vector<int> parent(static_cast<std::size_t>(f.n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v)
            v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        return v;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
    for (const auto &ci : info_)
    {
        if (ci.kind == Kind::small)
            for (std::size_t i = 1; i < ci.vars.size(); ++i)
                unite(ci.vars[0], ci.vars[i]);
        if (ci.kind == Kind::block)
            for (std::size_t i = 1; i < ci.picks.size(); ++i)
                unite(std::get<1>(ci.picks[0]), std::get<1>(ci.picks[i]));
    }
    block_of_.assign(static_cast<std::size_t>(f.n), -1);
    local_of_.assign(static_cast<std::size_t>(f.n), 0);
    std::vector<int> root_block(static_cast<std::size_t>(f.n), -1);
    for (int v = 0; v < f.n; ++v)
    {
        const int r = find(v);
        if (root_block[static_cast<std::size_t>(r)] < 0)
        {
            root_block[static_cast<std::size_t>(r)] = static_cast<int>(block_vars_.size());
            block_vars_.emplace_back();
        }
        const int b = root_block[static_cast<std::size_t>(r)];
        block_of_[static_cast<std::size_t>(v)] = b;
        local_of_[static_cast<std::size_t>(v)] = static_cast<int>(block_vars_[static_cast<std::size_t>(b)].size());
        block_vars_[static_cast<std::size_t>(b)].push_back(v);
    }
    s_blocks_.resize(block_vars_.size());
    for (std::size_t b = 0; b < block_vars_.size(); ++b)
    {
        const auto nb = static_cast<Eigen::Index>(block_vars_[b].size());
        s_blocks_[b] = RMatrix::Zero(nb, nb);
    }
    s_llt_.resize(block_vars_.size());
}

bool KktSolver::factor(const Scaling &w)
{
    const bool ok = split_ ? factor_split(w) : factor_dense(w);
    if (!ok)
        return false;
    const int p = form_.p;
    if (p == 0)
        return true;
    z_.resize(form_.n, p);
    for (int i = 0; i < p; ++i)
    {
        const RVector col = RVector(form_.A.row(i).transpose());
        RVector zi;
        apply_h_inv(col, zi);
        z_.col(i) = zi;
    }
    RMatrix schur = form_.A * z_;
    schur = 0.5 * (schur + schur.transpose());
    const double scale = std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    schur.diagonal().array() += 1e-14 * scale;
    schur_.compute(schur);
    return schur_.info() == Eigen::Success && schur_.isPositive();
}

bool KktSolver::factor_dense(const Scaling &w)
{
    const Eigen::Index n = form_.n;
    const Eigen::Index m = form_.cones.total;
    RMatrix gd = RMatrix(form_.G);
    RMatrix y(m, n);
    RVector col, out;
    for (Eigen::Index j = 0; j < n; ++j)
    {
        col = gd.col(j);
        apply_w2_inv(form_.cones, w, col, out);
        y.col(j) = out;
    }
    RMatrix h = gd.transpose() * y;
    h = 0.5 * (h + h.transpose());
    reg_ = 1e-13 * std::max(1.0, h.diagonal().maxCoeff());
    h.diagonal().array() += reg_;
    dense_ldlt_.compute(h);
    return dense_ldlt_.info() == Eigen::Success;
}

bool KktSolver::factor_split(const Scaling &w)
{
    const auto &f = form_;
    const int n = f.n;
    std::vector<Triplet> u_trip;
    for (auto &b : s_blocks_)
        b.setZero();
    auto add_s = [&](int r, int c, double v) {
        s_blocks_[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(r)])](
            local_of_[static_cast<std::size_t>(r)], local_of_[static_cast<std::size_t>(c)]) += v;
    };
    std::vector<std::pair<int, RMatrix>> cores; // (first column, block)
    int col = 0;

    auto add_row_column = [&](int r, int column) {
        for (SpMatRow::InnerIterator it(f.G, r); it; ++it)
            u_trip.emplace_back(static_cast<int>(it.col()), column, it.value());
    };

    for (const auto &ci : info_)
    {
        if (ci.lp)
        {
            const double wi = w.lp_w[ci.index];
            const double v = 1.0 / (wi * wi);
            if (ci.kind == Kind::small)
            {
                for (SpMatRow::InnerIterator a(f.G, ci.start); a; ++a)
                    for (SpMatRow::InnerIterator b(f.G, ci.start); b; ++b)
                        add_s(static_cast<int>(a.col()), static_cast<int>(b.col()),
                                            v * a.value() * b.value());
            }
            else
            {
                add_row_column(ci.start, col);
                cores.emplace_back(col, RMatrix::Constant(1, 1, v));
                ++col;
            }
            continue;
        }
        const auto &sc = w.soc[static_cast<std::size_t>(ci.index)];
        const double e2 = 1.0 / (sc.eta * sc.eta);
        switch (ci.kind)
        {
        case Kind::small: {
            const int t = static_cast<int>(ci.vars.size());
            RMatrix gc = RMatrix::Zero(ci.dim, t);
            for (int r = 0; r < ci.dim; ++r)
                for (SpMatRow::InnerIterator it(f.G, ci.start + r); it; ++it)
                {
                    const auto pos = std::lower_bound(ci.vars.begin(), ci.vars.end(), static_cast<int>(it.col()));
                    gc(r, pos - ci.vars.begin()) += it.value();
                }
            const RMatrix blk = gc.transpose() * soc_w2_inv(sc) * gc;
            for (int a = 0; a < t; ++a)
                for (int b = 0; b < t; ++b)
                    add_s(ci.vars[static_cast<std::size_t>(a)], ci.vars[static_cast<std::size_t>(b)],
                                        blk(a, b));
            break;
        }
        case Kind::block: {
            const RMatrix full = soc_w2_inv(sc);
            for (const auto &[ra, va, ga] : ci.picks)
                for (const auto &[rb, vb, gb] : ci.picks)
                    add_s(va, vb, ga * gb * full(ra, rb));
            break;
        }
        case Kind::selection: {
            // G' W^{-2} G = e2 [G'G + 2 (G'Jw)(G'Jw)' - 2 g0 g0']
            bool has_row0 = false;
            for (int r = 0; r < ci.dim; ++r)
            {
                const double jw = r == 0 ? sc.wbar[0] : -sc.wbar[r];
                for (SpMatRow::InnerIterator it(f.G, ci.start + r); it; ++it)
                {
                    const int j = static_cast<int>(it.col());
                    add_s(j, j, e2 * it.value() * it.value());
                    u_trip.emplace_back(j, col, jw * it.value());
                    if (r == 0)
                        has_row0 = true;
                }
            }
            if (has_row0)
            {
                add_row_column(ci.start, col + 1);
                RMatrix blk = RMatrix::Zero(2, 2);
                blk(0, 0) = 2.0 * e2;
                blk(1, 1) = -2.0 * e2;
                cores.emplace_back(col, blk);
                col += 2;
            }
            else
            {
                cores.emplace_back(col, RMatrix::Constant(1, 1, 2.0 * e2));
                col += 1;
            }
            break;
        }
        case Kind::dense: {
            const RMatrix full = soc_w2_inv(sc);
            const int r = static_cast<int>(ci.nonzero_rows.size());
            RMatrix blk(r, r);
            for (int a = 0; a < r; ++a)
            {
                add_row_column(ci.nonzero_rows[static_cast<std::size_t>(a)], col + a);
                for (int b = 0; b < r; ++b)
                    blk(a, b) = full(ci.nonzero_rows[static_cast<std::size_t>(a)] - ci.start,
                                     ci.nonzero_rows[static_cast<std::size_t>(b)] - ci.start);
            }
            cores.emplace_back(col, blk);
            col += r;
            break;
        }
        }
    }

    // Diagonal of S so far, to find variables that only live in the low-rank part.
    RVector sdiag(n);
    for (int i = 0; i < n; ++i)
        sdiag[i] = s_blocks_[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(i)])](
            local_of_[static_cast<std::size_t>(i)], local_of_[static_cast<std::size_t>(i)]);

    int rank = col;
    Eigen::SparseMatrix<double> u(n, rank);
    u.setFromTriplets(u_trip.begin(), u_trip.end());
    RMatrix core = RMatrix::Zero(rank, rank);
    for (const auto &[c0, blk] : cores)
        core.block(c0, c0, blk.rows(), blk.cols()) = blk;

    // Variables with no block-diagonal contribution get the diagonal of U C U'
    // moved into S, compensated by an extra rank-one column.
    const double dscale = std::max(1.0, sdiag.cwiseAbs().maxCoeff());
    Eigen::SparseMatrix<double, Eigen::RowMajor> ur(u);
    std::vector<std::pair<int, double>> compensate;
    for (int i = 0; i < n; ++i)
    {
        if (sdiag[i] > 1e-12 * dscale)
            continue;
        double d = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator a(ur, i); a; ++a)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator b(ur, i); b; ++b)
                d += a.value() * core(a.col(), b.col()) * b.value();
        if (d > 0.0)
            compensate.emplace_back(i, d);
    }
    if (!compensate.empty())
    {
        const int extra = static_cast<int>(compensate.size());
        for (int e = 0; e < extra; ++e)
        {
            u_trip.emplace_back(compensate[static_cast<std::size_t>(e)].first, rank + e, 1.0);
            add_s(compensate[static_cast<std::size_t>(e)].first, compensate[static_cast<std::size_t>(e)].first,
                                compensate[static_cast<std::size_t>(e)].second);
            sdiag[compensate[static_cast<std::size_t>(e)].first] += compensate[static_cast<std::size_t>(e)].second;
        }
        RMatrix core2 = RMatrix::Zero(rank + extra, rank + extra);
        core2.topLeftCorner(rank, rank) = core;
        for (int e = 0; e < extra; ++e)
            core2(rank + e, rank + e) = -compensate[static_cast<std::size_t>(e)].second;
        core = std::move(core2);
        rank += extra;
        u.resize(n, rank);
        u.setFromTriplets(u_trip.begin(), u_trip.end());
    }

    reg_ = 1e-13 * std::max(1.0, sdiag.maxCoeff());
    for (int i = 0; i < n; ++i)
        add_s(i, i, reg_);

    for (std::size_t b = 0; b < s_blocks_.size(); ++b)
    {
        s_llt_[b].compute(s_blocks_[b]);
        if (s_llt_[b].info() != Eigen::Success)
            return false;
    }

    u_ = std::move(u);
    core_ = std::move(core);
    rank_ = rank;
    if (rank_ == 0)
        return true;
    si_u_ = RMatrix(u_);
    s_solve(si_u_);
    const RMatrix m = u_.transpose() * si_u_;
    RMatrix cap = RMatrix::Identity(rank_, rank_) + core_ * m;
    cap_lu_.compute(cap);
    return cap.allFinite();
}

void KktSolver::s_solve(Eigen::Ref<RMatrix> x) const
{
    for (std::size_t b = 0; b < block_vars_.size(); ++b)
    {
        const auto &vars = block_vars_[b];
        const Eigen::Index nb = static_cast<Eigen::Index>(vars.size());
        if (nb == 1)
        {
            x.row(vars[0]) /= s_blocks_[b](0, 0);
            continue;
        }
        RMatrix g(nb, x.cols());
        for (Eigen::Index i = 0; i < nb; ++i)
            g.row(i) = x.row(vars[static_cast<std::size_t>(i)]);
        s_llt_[b].solveInPlace(g);
        for (Eigen::Index i = 0; i < nb; ++i)
            x.row(vars[static_cast<std::size_t>(i)]) = g.row(i);
    }
}

void KktSolver::apply_h_inv(const RVector &r, RVector &out) const
{
    if (!split_)
    {
        out = dense_ldlt_.solve(r);
        return;
    }
    out = r;
    s_solve(out);
    if (rank_ == 0)
        return;
    const RVector wv = core_ * (u_.transpose() * out);
    const RVector v = cap_lu_.solve(wv);
    out -= si_u_ * v;
}

void KktSolver::solve_reduced(const RVector &r1, const RVector &r2, RVector &dx, RVector &dy) const
{
    RVector t;
    apply_h_inv(r1, t);
    if (form_.p == 0)
    {
        dx = t;
        dy.resize(0);
        return;
    }
    dy = schur_.solve(form_.A * t - r2);
    dx = t - z_ * dy;
}

void KktSolver::solve_once(const Scaling &w, const RVector &rx, const RVector &ry, const RVector &rz, RVector &dx,
                           RVector &dy, RVector &dz) const
{
    RVector w2rz;
    apply_w2_inv(form_.cones, w, rz, w2rz);
    const RVector r1 = rx + form_.G.transpose() * w2rz;
    solve_reduced(r1, ry, dx, dy);
    const RVector gdx = form_.G * dx - rz;
    apply_w2_inv(form_.cones, w, gdx, dz);
}

bool KktSolver::solve(const Scaling &w, const RVector &rx, const RVector &ry, const RVector &rz, RVector &dx,
                      RVector &dy, RVector &dz)
{
    // Refinement measures the error on the full system, where the scaling
    // does not inflate the right-hand side.
    solve_once(w, rx, ry, rz, dx, dy, dz);
    const double rnorm = 1.0 + std::max({rx.lpNorm<Eigen::Infinity>(), ry.size() ? ry.lpNorm<Eigen::Infinity>() : 0.0,
                                         rz.lpNorm<Eigen::Infinity>()});
    RVector ex, ey, ez, t1, t2, cx, cy, cz;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kRefineSteps; ++it)
    {
        ex = rx - form_.G.transpose() * dz;
        if (form_.p)
            ex -= form_.A.transpose() * dy;
        ey = ry - form_.A * dx;
        apply_w(form_.cones, w, dz, t1);
        apply_w(form_.cones, w, t1, t2);
        ez = rz - form_.G * dx + t2;
        const double err = std::max({ex.lpNorm<Eigen::Infinity>(), ey.size() ? ey.lpNorm<Eigen::Infinity>() : 0.0,
                                     ez.lpNorm<Eigen::Infinity>()});
        if (!std::isfinite(err))
            return false;
        if (err <= 1e-15 * rnorm || err > 0.5 * prev)
            break;
        prev = err;
        solve_once(w, ex, ey, ez, cx, cy, cz);
        dx += cx;
        if (form_.p)
            dy += cy;
        dz += cz;
    }
    return dx.allFinite() && dz.allFinite() && (form_.p == 0 || dy.allFinite());
}

} // namespace irsra::conic::detail
