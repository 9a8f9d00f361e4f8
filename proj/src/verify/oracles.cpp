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
#include "verify/oracles.hpp"
#include "irsra/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace irsra::verify {

namespace {

double row_dot(const conic::SparseRow &r, const RVector &x)
{
    double acc = 0.0;
    for (const auto &[col, v] : r.terms)
        acc += v * x[col];
    return acc;
}

// min over cones of (c.x + d) - ||Ax + b||; x is assumed inside the bounds
double cone_margin(const conic::ConicProblem &p, const RVector &x)
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto &c : p.soc_constraints)
    {
        double ss = 0.0;
        for (std::size_t i = 0; i < c.a.size(); ++i)
        {
            const double v = row_dot(c.a[i], x) + c.b[i];
            ss += v * v;
        }
        m = std::min(m, row_dot(c.c_row, x) + c.d - std::sqrt(ss));
    }
    return m;
}

} // namespace

ChannelSet random_channels(int K, int N, std::uint64_t seed)
{
    ChannelSet ch;
    RandomStream rng(seed);
    for (int k = 0; k < K; ++k)
    {
        CVector h(N), g(N);
        for (int n = 0; n < N; ++n)
            h[n] = rng.complex_gaussian(1.0);
        for (int n = 0; n < N; ++n)
            g[n] = rng.complex_gaussian(1.0);
        ch.h.push_back(h);
        ch.g.push_back(g);
    }
    ch.direct = CMatrix(K, K);
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
            ch.direct(j, k) = rng.complex_gaussian(1.0);
    return ch;
}

std::vector<double> sinr_reference(const ChannelSet &ch, const CVector &phi, const RVector &p, double sigma2)
{
    const int K = ch.K();
    const int N = ch.N();
    std::vector<double> gain(static_cast<std::size_t>(K * K));
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
        {
            double re = 0.0, im = 0.0;
            for (int n = 0; n < N; ++n)
            {
                // conj(g) * phi * h, expanded by hand
                const Complex g = ch.g[static_cast<std::size_t>(k)][n];
                const Complex h = ch.h[static_cast<std::size_t>(j)][n];
                const double ar = g.real(), ai = -g.imag();
                const double br = phi[n].real() * h.real() - phi[n].imag() * h.imag();
                const double bi = phi[n].real() * h.imag() + phi[n].imag() * h.real();
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            gain[static_cast<std::size_t>(j * K + k)] = re * re + im * im;
        }
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        double interference = sigma2;
        for (int j = 0; j < K; ++j)
            if (j != k)
                interference += p[j] * gain[static_cast<std::size_t>(j * K + k)];
        out[static_cast<std::size_t>(k)] = p[k] * gain[static_cast<std::size_t>(k * K + k)] / interference;
    }
    return out;
}

namespace {

// Objective where feasible, kBig + violation elsewhere. Every sublevel set is
// convex, and minimizing over trailing coordinates keeps that property, so a
// 1-D search per coordinate is enough.
constexpr double kBig = 1e6;

double merit(const conic::ConicProblem &p, const RVector &x)
{
    const double m = cone_margin(p, x);
    return m >= 0.0 ? p.objective.dot(x) : kBig - m;
}

class NestedSearch
{
public:
    NestedSearch(const conic::ConicProblem &p, int points, double resolution)
        : p_(p), points_(std::max(points, 3)), res_(resolution), x_(p.n_vars)
    {
    }

    // min of merit over coordinates d..n-1 with x_[0..d) fixed; leaves the argmin in x_
    double solve(int d)
    {
        if (d == p_.n_vars)
            return merit(p_, x_);
        auto f = [&](double t) {
            x_[d] = t;
            return solve(d + 1);
        };
        // coarse scan, then golden section inside the best bracket
        const double lo = p_.lower[d], hi = p_.upper[d];
        double best_t = lo, best_v = std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i < points_; ++i)
        {
            const double t = lo + (hi - lo) * i / (points_ - 1);
            const double v = f(t);
            if (v < best_v)
            {
                best_v = v;
                best_t = t;
                best_i = i;
            }
        }
        double a = lo + (hi - lo) * std::max(best_i - 1, 0) / (points_ - 1);
        double b = lo + (hi - lo) * std::min(best_i + 1, points_ - 1) / (points_ - 1);
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - r * (b - a), e = a + r * (b - a);
        double fc = f(c), fe = f(e);
        while (b - a > res_)
        {
            if (fc <= fe)
            {
                b = e;
                e = c;
                fe = fc;
                c = b - r * (b - a);
                fc = f(c);
            }
            else
            {
                a = c;
                c = e;
                fc = fe;
                e = a + r * (b - a);
                fe = f(e);
            }
        }
        for (const auto &[t, v] : {std::pair{c, fc}, std::pair{e, fe}})
            if (v < best_v)
            {
                best_v = v;
                best_t = t;
            }
        x_[d] = best_t;
        return solve(d + 1);
    }

    const RVector &x() const { return x_; }

private:
    const conic::ConicProblem &p_;
    int points_;
    double res_;
    RVector x_;
};

} // namespace

GridResult grid_search(const conic::ConicProblem &p, int points, double resolution)
{
    if (!p.eq_constraints.empty())
        throw std::invalid_argument("grid_search: equalities not supported");
    for (int i = 0; i < p.n_vars; ++i)
        if (!std::isfinite(p.lower[i]) || !std::isfinite(p.upper[i]))
            throw std::invalid_argument("grid_search: every variable needs finite bounds");
    NestedSearch search(p, points, resolution);
    GridResult out;
    const double v = search.solve(0);
    out.x = search.x();
    out.feasible = cone_margin(p, out.x) >= 0.0;
    out.value = out.feasible ? v : std::numeric_limits<double>::infinity();
    return out;
}

conic::ConicProblem random_tiny_socp(int n, std::uint64_t seed)
{
    RandomStream rng(seed);
    conic::ConicProblem p(n);
    RVector x0(n);
    for (int i = 0; i < n; ++i)
    {
        x0[i] = rng.uniform() - 0.5;
        p.objective[i] = rng.normal();
        p.set_bounds(i, -1.0, 1.0);
    }
    const int cones = static_cast<int>(rng.below(4));
    for (int c = 0; c < cones; ++c)
    {
        auto &cone = p.add_soc();
        const int m = 1 + static_cast<int>(rng.below(3));
        double norm2 = 0.0;
        for (int r = 0; r < m; ++r)
        {
            auto &row = cone.add_row(0.5 * rng.normal());
            double v = cone.b.back();
            for (int i = 0; i < n; ++i)
            {
                const double a = rng.normal();
                row.add(i, a);
                v += a * x0[i];
            }
            norm2 += v * v;
        }
        double cx = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double a = 0.3 * rng.normal();
            cone.c_row.add(i, a);
            cx += a * x0[i];
        }
        cone.d = std::sqrt(norm2) - cx + 0.3 + 0.7 * rng.uniform();
    }
    return p;
}

double single_pair_optimum(const ChannelSet &ch, const ModuleMask &mask, int L, double p_max, double sigma2)
{
    double acc = 0.0;
    for (int m : mask.indices())
        for (int l = 0; l < L; ++l)
        {
            const int n = m * L + l;
            acc += std::abs(ch.g[0][n]) * std::abs(ch.h[0][n]);
        }
    return p_max * acc * acc / sigma2;
}

PowerGridResult power_grid_2pair(const RMatrix &G, const std::vector<double> &p_max, double sigma2, int steps)
{
    PowerGridResult best;
    best.best = -1.0;
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; b <= steps; ++b)
        {
            const double p1 = p_max[0] * a / steps;
            const double p2 = p_max[1] * b / steps;
            const double s1 = p1 * G(0, 0) / (p2 * G(1, 0) + sigma2);
            const double s2 = p2 * G(1, 1) / (p1 * G(0, 1) + sigma2);
            const double v = std::min(s1, s2);
            if (v > best.best)
                best = {v, p1, p2};
        }
    return best;
}

double random_sampling_best(const ChannelSet &ch, const ModuleMask &mask, const NetworkConfig &config, int samples,
                            std::uint64_t seed)
{
    RandomStream rng(seed);
    double best = 0.0;
    CVector phi = CVector::Zero(config.N);
    RVector p(config.K);
    for (int s = 0; s < samples; ++s)
    {
        for (int m : mask.indices())
            for (int l = 0; l < config.L; ++l)
                phi[m * config.L + l] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
        for (int k = 0; k < config.K; ++k)
            p[k] = config.p_max_w[static_cast<std::size_t>(k)] * rng.uniform();
        const auto v = sinr_reference(ch, phi, p, config.sigma2_w);
        best = std::max(best, *std::min_element(v.begin(), v.end()));
    }
    return best;
}

std::vector<ModuleMask> enumerate_subsets(int M, int lo, int hi)
{
    std::vector<ModuleMask> out;
    for (unsigned bits = 1; bits < (1u << M); ++bits)
    {
        const int c = __builtin_popcount(bits);
        if (c < lo || c > hi)
            continue;
        ModuleMask m(M);
        for (int i = 0; i < M; ++i)
            m.active[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
        out.push_back(m);
    }
    return out;
}

} // namespace irsra::verify
