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
#include "irsra/conic.hpp"

#include "cones.hpp"
#include "kkt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace irsra::conic {

namespace {

using namespace detail;
using Triplet = Eigen::Triplet<double>;

constexpr double kStepFraction = 0.99;
constexpr int kMaxStalls = 4;

StandardForm to_standard(const ConicProblem &prob)
{
    StandardForm f;
    f.n = prob.n_vars;
    std::vector<Triplet> gt;
    std::vector<double> h;
    int row = 0;

    // LP rows first: bounds and half-spaces.
    for (int i = 0; i < prob.n_vars; ++i)
    {
        if (std::isfinite(prob.lower[i]))
        {
            gt.emplace_back(row, i, -1.0);
            h.push_back(-prob.lower[i]);
            ++row;
        }
        if (std::isfinite(prob.upper[i]))
        {
            gt.emplace_back(row, i, 1.0);
            h.push_back(prob.upper[i]);
            ++row;
        }
    }
    for (const auto &c : prob.soc_constraints)
    {
        if (!c.a.empty())
            continue;
        double scale = 0.0;
        for (const auto &[j, v] : c.c_row.terms)
            scale = std::max(scale, std::abs(v));
        scale = scale > 0.0 ? 1.0 / scale : 1.0;
        for (const auto &[j, v] : c.c_row.terms)
            gt.emplace_back(row, j, -v * scale);
        h.push_back(c.d * scale);
        ++row;
    }
    f.cones.n_lp = row;

    for (const auto &c : prob.soc_constraints)
    {
        if (c.a.empty())
            continue;
        double scale = 0.0;
        for (const auto &[j, v] : c.c_row.terms)
            scale = std::max(scale, std::abs(v));
        for (const auto &r : c.a)
            for (const auto &[j, v] : r.terms)
                scale = std::max(scale, std::abs(v));
        scale = scale > 0.0 ? 1.0 / scale : 1.0;
        const int dim = static_cast<int>(c.a.size()) + 1;
        f.cones.soc_start.push_back(row);
        f.cones.soc_dim.push_back(dim);
        for (const auto &[j, v] : c.c_row.terms)
            gt.emplace_back(row, j, -v * scale);
        h.push_back(c.d * scale);
        for (std::size_t r = 0; r < c.a.size(); ++r)
        {
            for (const auto &[j, v] : c.a[r].terms)
                gt.emplace_back(row + 1 + static_cast<int>(r), j, -v * scale);
            h.push_back(c.b[r] * scale);
        }
        row += dim;
    }
    f.cones.total = row;
    f.G.resize(row, f.n);
    f.G.setFromTriplets(gt.begin(), gt.end());
    f.G.makeCompressed();
    f.h = Eigen::Map<const RVector>(h.data(), static_cast<Eigen::Index>(h.size()));

    std::vector<Triplet> at;
    f.p = static_cast<int>(prob.eq_constraints.size());
    f.b.resize(f.p);
    for (int i = 0; i < f.p; ++i)
    {
        const auto &e = prob.eq_constraints[static_cast<std::size_t>(i)];
        double scale = 0.0;
        for (const auto &[j, v] : e.row.terms)
            scale = std::max(scale, std::abs(v));
        scale = scale > 0.0 ? 1.0 / scale : 1.0;
        for (const auto &[j, v] : e.row.terms)
            at.emplace_back(i, j, v * scale);
        f.b[i] = e.rhs * scale;
    }
    f.A.resize(f.p, f.n);
    f.A.setFromTriplets(at.begin(), at.end());
    f.A.makeCompressed();

    const double cmax = prob.objective.lpNorm<Eigen::Infinity>();
    f.c = cmax > 0.0 ? RVector(prob.objective / cmax) : prob.objective;
    return f;
}

// Shift v into the cone interior as in the usual starting-point heuristic.
void shift_interior(const ConeLayout &k, RVector &v)
{
    const double a = interior_deficit(k, v);
    if (a >= -1e-8)
        add_identity(k, v, 1.0 + a);
}

double safe_norm(const RVector &v) { return v.size() ? v.norm() : 0.0; }

struct Iterate
{
    RVector x, y, z, s;
    double tau = 1.0;
    double kappa = 1.0;
};

} // namespace

SolveReport solve(const ConicProblem &prob, const SolverSettings &st)
{
    prob.check();
    SolveReport rep;
    const StandardForm f = to_standard(prob);
    const ConeLayout &k = f.cones;
    if (k.total == 0)
    {
        rep.status = SolveStatus::numerical_failure;
        rep.message = "problem has no cone or bound constraints";
        return rep;
    }

    const double feastol = st.tol_feas;
    const double gaptol = st.tol_gap;
    const double nb = safe_norm(f.b), nh = safe_norm(f.h), nc = safe_norm(f.c);

    KktSolver kkt(f);
    Scaling w = identity_scaling(k);
    if (!kkt.factor(w))
    {
        rep.status = SolveStatus::numerical_failure;
        rep.message = "initial factorization failed";
        return rep;
    }

    Iterate it;
    {
        RVector dx, dy, dz;
        if (!kkt.solve(w, RVector::Zero(f.n), f.b, f.h, dx, dy, dz))
        {
            rep.status = SolveStatus::numerical_failure;
            rep.message = "initial primal solve failed";
            return rep;
        }
        it.x = dx;
        it.s = -dz;
        shift_interior(k, it.s);
        if (!kkt.solve(w, -f.c, RVector::Zero(f.p), RVector::Zero(k.total), dx, dy, dz))
        {
            rep.status = SolveStatus::numerical_failure;
            rep.message = "initial dual solve failed";
            return rep;
        }
        it.y = dy;
        it.z = dz;
        shift_interior(k, it.z);
    }

    static const bool trace = std::getenv("IRSRA_CONIC_TRACE") != nullptr;
    const double degree = static_cast<double>(k.degree());
    RVector best_x;
    double best_score = std::numeric_limits<double>::infinity();
    int stalls = 0;
    bool finished = false;
    std::string failure;

    auto finish_optimal = [&](const RVector &x) {
        const PointCheck pc = check_point(prob, x);
        if (pc.max_primal_residual <= st.tol_feas && pc.max_cone_violation <= st.tol_feas)
        {
            rep.status = SolveStatus::optimal;
            rep.x = x;
            rep.objective_value = prob.objective.dot(x);
            rep.max_primal_residual = pc.max_primal_residual;
            rep.max_cone_violation = pc.max_cone_violation;
            return true;
        }
        return false;
    };

    RVector x1, y1, z1, x2, y2, z2, ds, tmp, wz, ws, r1, r2, r3;
    int iter = 0;
    for (; iter <= st.max_iter && !finished; ++iter)
    {
        // residuals
        const RVector aty_gtz = (f.p ? RVector(f.A.transpose() * it.y) : RVector::Zero(f.n)) + f.G.transpose() * it.z;
        const RVector ax = f.A * it.x;
        const RVector gx = f.G * it.x;
        r1 = aty_gtz + f.c * it.tau;
        r2 = -ax + f.b * it.tau;
        r3 = -gx + f.h * it.tau - it.s;
        const double cx = f.c.dot(it.x);
        const double by = f.p ? f.b.dot(it.y) : 0.0;
        const double hz = f.h.dot(it.z);
        const double r4 = -cx - by - hz - it.kappa;

        const double pres = std::max(safe_norm(r2) / (1.0 + nb), safe_norm(r3) / (1.0 + nh)) / it.tau;
        const double dres = safe_norm(r1) / (1.0 + nc) / it.tau;
        const double gap = it.s.dot(it.z) / (it.tau * it.tau);
        const double pcost = cx / it.tau;
        const double dcost = -(by + hz) / it.tau;
        double relgap = std::numeric_limits<double>::infinity();
        if (pcost < 0.0)
            relgap = gap / -pcost;
        else if (dcost > 0.0)
            relgap = gap / dcost;

        if (trace)
            std::fprintf(stderr, "it %3d pres %.3e dres %.3e gap %.3e rel %.3e tau %.3e kap %.3e pc %.6e\n", iter, pres,
                         dres, gap, relgap, it.tau, it.kappa, pcost);
        const double score = std::max({pres, dres, std::min(gap, relgap)});
        if (std::isfinite(score) && score < best_score)
        {
            best_score = score;
            best_x = it.x / it.tau;
        }

        if (pres <= feastol && dres <= feastol && (gap <= gaptol || relgap <= gaptol))
        {
            if (finish_optimal(it.x / it.tau))
            {
                finished = true;
                break;
            }
        }

        // Primal infeasibility: a dual ray with b'y + h'z < 0 and A'y + G'z ~ 0.
        if (by + hz < 0.0)
        {
            const double scale = -(by + hz);
            const double ray_res = safe_norm(aty_gtz) / scale;
            if (ray_res <= feastol)
            {
                const RVector yc = f.p ? RVector(it.y / scale) : RVector();
                const RVector zc = it.z / scale;
                const RVector cert = (f.p ? RVector(f.A.transpose() * yc) : RVector::Zero(f.n)) + f.G.transpose() * zc;
                const double lin = (f.p ? f.b.dot(yc) : 0.0) + f.h.dot(zc);
                if (cert.lpNorm<Eigen::Infinity>() <= st.tol_feas && std::abs(lin + 1.0) <= 1e-6 &&
                    interior_deficit(k, zc) <= 0.0)
                {
                    rep.status = SolveStatus::infeasible;
                    rep.message = "dual improving ray";
                    finished = true;
                    break;
                }
            }
        }
        // Dual infeasibility (unbounded objective) has no status of its own.
        if (cx < 0.0)
        {
            const double ray_res = std::max(safe_norm(ax), safe_norm(RVector(gx + it.s))) / -cx;
            if (ray_res <= feastol)
            {
                rep.status = SolveStatus::numerical_failure;
                rep.message = "objective unbounded below";
                finished = true;
                break;
            }
        }
        if (iter == st.max_iter)
            break;

        if (!compute_scaling(k, it.s, it.z, w) || !kkt.factor(w))
        {
            failure = "scaling or factorization failed";
            break;
        }
        const RVector &lam = w.lambda;
        if (!kkt.solve(w, -f.c, f.b, f.h, x1, y1, z1))
        {
            failure = "KKT solve failed";
            break;
        }
        const double den_base = it.kappa / it.tau - f.c.dot(x1) - (f.p ? f.b.dot(y1) : 0.0) - f.h.dot(z1);

        // One Newton direction for a given (d_s, d_kappa, eta).
        struct Dir
        {
            RVector dx, dy, dz, ds;
            double dtau = 0.0, dkappa = 0.0;
        };
        auto direction = [&](const RVector &d_s, double d_kappa, double eta, Dir &out) {
            jordan_divide(k, lam, d_s, tmp); // lambda \ d_s
            apply_w(k, w, tmp, ws);
            const RVector rz = eta * r3 - ws;
            if (!kkt.solve(w, -eta * r1, eta * r2, rz, x2, y2, z2))
                return false;
            const double num = -eta * r4 + f.c.dot(x2) + (f.p ? f.b.dot(y2) : 0.0) + f.h.dot(z2) + d_kappa / it.tau;
            out.dtau = num / den_base;
            out.dx = x2 + out.dtau * x1;
            out.dy = f.p ? RVector(y2 + out.dtau * y1) : RVector();
            out.dz = z2 + out.dtau * z1;
            out.dkappa = (d_kappa - it.kappa * out.dtau) / it.tau;
            apply_w(k, w, out.dz, wz);
            apply_w(k, w, RVector(tmp - wz), out.ds);
            return out.dx.allFinite() && out.dz.allFinite() && std::isfinite(out.dtau);
        };
        auto step_length = [&](const Dir &d) {
            double a = std::min(max_step(k, it.s, d.ds), max_step(k, it.z, d.dz));
            if (d.dtau < 0.0)
                a = std::min(a, -it.tau / d.dtau);
            if (d.dkappa < 0.0)
                a = std::min(a, -it.kappa / d.dkappa);
            return a;
        };

        // affine predictor
        Dir aff;
        RVector lamlam;
        jordan_product(k, lam, lam, lamlam);
        if (!direction(-lamlam, -it.tau * it.kappa, 1.0, aff))
        {
            failure = "affine direction failed";
            break;
        }
        const double a_aff = std::min(1.0, step_length(aff));
        const double sigma = std::clamp(std::pow(1.0 - a_aff, 3), 1e-8, 1.0);
        const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (degree + 1.0);

        // combined corrector
        RVector wis, wdz, corr;
        apply_w_inv(k, w, aff.ds, wis);
        apply_w(k, w, aff.dz, wdz);
        jordan_product(k, wis, wdz, corr);
        ds = -lamlam - corr;
        add_identity(k, ds, sigma * mu);
        const double dk = -it.tau * it.kappa - aff.dtau * aff.dkappa + sigma * mu;
        Dir cmb;
        if (!direction(ds, dk, 1.0 - sigma, cmb))
        {
            failure = "combined direction failed";
            break;
        }
        const double a = std::min(1.0, kStepFraction * step_length(cmb));
        if (!(a > 1e-10))
        {
            if (++stalls >= kMaxStalls)
                break;
        }
        else
            stalls = 0;

        it.x += a * cmb.dx;
        if (f.p)
            it.y += a * cmb.dy;
        it.z += a * cmb.dz;
        it.s += a * cmb.ds;
        it.tau += a * cmb.dtau;
        it.kappa += a * cmb.dkappa;

        // Keep tau from collapsing into the noise floor.
        if (!(it.tau > 0.0) || !(it.kappa > 0.0) || !it.x.allFinite() || !it.z.allFinite())
        {
            failure = "iterate left the cone";
            break;
        }
    }
    rep.iterations = std::min(iter, st.max_iter);

    if (!finished && !failure.empty() && iter == 0)
    {
        rep.status = SolveStatus::numerical_failure;
        rep.message = failure;
    }
    else if (!finished)
    {
        // Out of iterations, stalled or lost accuracy: report the best point
        // found, never "infeasible".
        rep.status = SolveStatus::max_iterations;
        rep.message = failure.empty() ? "no certified termination" : failure;
        if (best_x.size())
        {
            const PointCheck pc = check_point(prob, best_x);
            rep.x = best_x;
            rep.objective_value = prob.objective.dot(best_x);
            rep.max_primal_residual = pc.max_primal_residual;
            rep.max_cone_violation = pc.max_cone_violation;
        }
    }
    return rep;
}

} // namespace irsra::conic
