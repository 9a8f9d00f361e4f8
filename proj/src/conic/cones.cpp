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
#include "cones.hpp"

#include <cmath>
#include <limits>

namespace irsra::conic::detail {

namespace {

// (u0 - |u1|)(u0 + |u1|), accurate near the boundary.
double hyperbolic_norm2(double u0, double n1) { return (u0 - n1) * (u0 + n1); }

} // namespace

Scaling identity_scaling(const ConeLayout &k)
{
    Scaling w;
    w.lp_w = RVector::Ones(k.n_lp);
    w.soc.resize(static_cast<std::size_t>(k.n_soc()));
    for (int i = 0; i < k.n_soc(); ++i)
    {
        w.soc[static_cast<std::size_t>(i)].eta = 1.0;
        w.soc[static_cast<std::size_t>(i)].wbar = RVector::Zero(k.soc_dim[static_cast<std::size_t>(i)]);
        w.soc[static_cast<std::size_t>(i)].wbar[0] = 1.0;
    }
    w.lambda = RVector::Zero(k.total);
    return w;
}

bool compute_scaling(const ConeLayout &k, const RVector &s, const RVector &z, Scaling &w)
{
    w.lp_w.resize(k.n_lp);
    w.lambda.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
    {
        if (!(s[i] > 0.0) || !(z[i] > 0.0))
            return false;
        w.lp_w[i] = std::sqrt(s[i] / z[i]);
        w.lambda[i] = std::sqrt(s[i] * z[i]);
    }
    w.soc.resize(static_cast<std::size_t>(k.n_soc()));
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto sv = s.segment(st, d);
        const auto zv = z.segment(st, d);
        const double sres = hyperbolic_norm2(sv[0], sv.tail(d - 1).norm());
        const double zres = hyperbolic_norm2(zv[0], zv.tail(d - 1).norm());
        if (!(sres > 0.0) || !(zres > 0.0) || !(sv[0] > 0.0) || !(zv[0] > 0.0))
            return false;
        const RVector sb = sv / std::sqrt(sres);
        const RVector zb = zv / std::sqrt(zres);
        const double gamma = std::sqrt((1.0 + sb.dot(zb)) / 2.0);
        auto &sc = w.soc[static_cast<std::size_t>(c)];
        sc.wbar.resize(d);
        sc.wbar[0] = (sb[0] + zb[0]) / (2.0 * gamma);
        sc.wbar.tail(d - 1) = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
        sc.eta = std::pow(sres / zres, 0.25);
        if (!std::isfinite(sc.eta) || !sc.wbar.allFinite())
            return false;
    }
    RVector lam(k.total);
    apply_w(k, w, z, lam);
    w.lambda = lam;
    return true;
}

void apply_w(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out)
{
    out.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
        out[i] = w.lp_w[i] * in[i];
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto &sc = w.soc[static_cast<std::size_t>(c)];
        const auto w1 = sc.wbar.tail(d - 1);
        const auto v1 = in.segment(st + 1, d - 1);
        const double w1v1 = w1.dot(v1);
        const double v0 = in[st];
        out[st] = sc.eta * (sc.wbar[0] * v0 + w1v1);
        out.segment(st + 1, d - 1) = sc.eta * (v1 + (v0 + w1v1 / (1.0 + sc.wbar[0])) * w1);
    }
}

void apply_w_inv(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out)
{
    out.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
        out[i] = in[i] / w.lp_w[i];
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto &sc = w.soc[static_cast<std::size_t>(c)];
        const auto w1 = sc.wbar.tail(d - 1);
        const auto v1 = in.segment(st + 1, d - 1);
        const double w1v1 = w1.dot(v1);
        const double v0 = in[st];
        out[st] = (sc.wbar[0] * v0 - w1v1) / sc.eta;
        out.segment(st + 1, d - 1) = (v1 + (-v0 + w1v1 / (1.0 + sc.wbar[0])) * w1) / sc.eta;
    }
}

void apply_w2_inv(const ConeLayout &k, const Scaling &w, const RVector &in, RVector &out)
{
    // W^{-2} = eta^{-2} (2 (J wbar)(J wbar)' - J)
    out.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
        out[i] = in[i] / (w.lp_w[i] * w.lp_w[i]);
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto &sc = w.soc[static_cast<std::size_t>(c)];
        const auto w1 = sc.wbar.tail(d - 1);
        const auto v1 = in.segment(st + 1, d - 1);
        const double v0 = in[st];
        const double jw_v = sc.wbar[0] * v0 - w1.dot(v1);
        const double e2 = 1.0 / (sc.eta * sc.eta);
        out[st] = e2 * (2.0 * sc.wbar[0] * jw_v - v0);
        out.segment(st + 1, d - 1) = e2 * (-2.0 * jw_v * w1 + v1);
    }
}

RMatrix soc_w2_inv(const SocScaling &sc)
{
    const Eigen::Index d = sc.wbar.size();
    RVector jw = sc.wbar;
    jw.tail(d - 1) *= -1.0;
    RMatrix m = 2.0 * jw * jw.transpose();
    m(0, 0) -= 1.0;
    for (Eigen::Index i = 1; i < d; ++i)
        m(i, i) += 1.0;
    return m / (sc.eta * sc.eta);
}

void jordan_product(const ConeLayout &k, const RVector &u, const RVector &v, RVector &out)
{
    out.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
        out[i] = u[i] * v[i];
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto uc = u.segment(st, d);
        const auto vc = v.segment(st, d);
        out[st] = uc.dot(vc);
        out.segment(st + 1, d - 1) = uc[0] * vc.tail(d - 1) + vc[0] * uc.tail(d - 1);
    }
}

void jordan_divide(const ConeLayout &k, const RVector &lam, const RVector &dv, RVector &out)
{
    out.resize(k.total);
    for (int i = 0; i < k.n_lp; ++i)
        out[i] = dv[i] / lam[i];
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto l1 = lam.segment(st + 1, d - 1);
        const auto d1 = dv.segment(st + 1, d - 1);
        const double l0 = lam[st];
        const double rho = hyperbolic_norm2(l0, l1.norm());
        const double l1d1 = l1.dot(d1);
        const double u0 = (l0 * dv[st] - l1d1) / rho;
        out[st] = u0;
        out.segment(st + 1, d - 1) = (d1 - u0 * l1) / l0;
    }
}

void add_identity(const ConeLayout &k, RVector &v, double scale)
{
    for (int i = 0; i < k.n_lp; ++i)
        v[i] += scale;
    for (int c = 0; c < k.n_soc(); ++c)
        v[k.soc_start[static_cast<std::size_t>(c)]] += scale;
}

double interior_deficit(const ConeLayout &k, const RVector &v)
{
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k.n_lp; ++i)
        m = std::max(m, -v[i]);
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        m = std::max(m, v.segment(st + 1, d - 1).norm() - v[st]);
    }
    return m;
}

double max_step(const ConeLayout &k, const RVector &u, const RVector &du)
{
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k.n_lp; ++i)
        if (du[i] < 0.0)
            alpha = std::min(alpha, -u[i] / du[i]);
    for (int c = 0; c < k.n_soc(); ++c)
    {
        const int st = k.soc_start[static_cast<std::size_t>(c)];
        const int d = k.soc_dim[static_cast<std::size_t>(c)];
        const auto u1 = u.segment(st + 1, d - 1);
        const auto d1 = du.segment(st + 1, d - 1);
        const double u0 = u[st];
        const double d0 = du[st];
        // f(a) = qa a^2 + 2 qb a + qc; first positive root leaves the cone.
        const double qa = d0 * d0 - d1.squaredNorm();
        const double qb = u0 * d0 - u1.dot(d1);
        const double qc = hyperbolic_norm2(u0, u1.norm());
        if (qc <= 0.0)
            return 0.0;
        double root = std::numeric_limits<double>::infinity();
        if (qa == 0.0)
        {
            if (qb < 0.0)
                root = -qc / (2.0 * qb);
        }
        else
        {
            const double disc = qb * qb - qa * qc;
            if (disc >= 0.0)
            {
                const double sq = std::sqrt(disc);
                const double q = -(qb + std::copysign(sq, qb));
                const double r1 = q / qa;
                const double r2 = q != 0.0 ? qc / q : std::numeric_limits<double>::infinity();
                if (r1 > 0.0)
                    root = std::min(root, r1);
                if (r2 > 0.0)
                    root = std::min(root, r2);
            }
        }
        alpha = std::min(alpha, root);
    }
    return alpha;
}

} // namespace irsra::conic::detail
