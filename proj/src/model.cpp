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
#include "irsra/model.hpp"

#include <algorithm>
#include <cmath>

namespace irsra {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

double distance(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

double NetworkConfig::max_p_max() const
{
    return p_max_w.empty() ? 0.0 : *std::max_element(p_max_w.begin(), p_max_w.end());
}

double NetworkConfig::sigma() const { return std::sqrt(sigma2_w); }

NetworkConfig reference_config()
{
    NetworkConfig c;
    c.K = 5;
    c.M = 10;
    c.L = 20;
    c.N = 200;
    c.p_max_w.assign(5, dbm_to_watts(20.0));
    c.sigma2_w = dbm_to_watts(-90.0);
    c.power_model.p_st_w = dbm_to_watts(10.0);
    c.power_model.p_dt_w = dbm_to_watts(10.0);
    c.power_model.xi_st = 1.2;
    c.power_model.module_coeff_w = 0.01;
    return c;
}

namespace {

void require_positive(double v, const char *name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(ConfigError::Kind::positivity, std::string(name) + " must be strictly positive and finite");
}

} // namespace

NetworkConfig validate(NetworkConfig c)
{
    using Kind = ConfigError::Kind;
    if (c.K < 1 || c.M < 1 || c.L < 1)
        throw ConfigError(Kind::dimension, "K, M and L must all be at least 1");
    if (c.N != c.M * c.L)
        throw ConfigError(Kind::dimension, "N = " + std::to_string(c.N) + " differs from M*L = " + std::to_string(c.M * c.L));
    if (static_cast<int>(c.p_max_w.size()) != c.K)
        throw ConfigError(Kind::dimension, "p_max must provide one value per ST (" + std::to_string(c.K) + ")");
    for (double p : c.p_max_w)
        require_positive(p, "p_max");
    require_positive(c.sigma2_w, "sigma2");
    require_positive(c.carrier_hz, "carrier_hz");
    require_positive(c.bandwidth_hz, "bandwidth_hz");
    require_positive(c.power_model.p_st_w, "P_ST");
    require_positive(c.power_model.p_dt_w, "P_DT");
    require_positive(c.power_model.xi_st, "xi_ST");
    require_positive(c.power_model.module_coeff_w, "module power coefficient");
    require_positive(c.exponents.direct, "direct exponent");
    require_positive(c.exponents.st_irs, "ST->IRS exponent");
    require_positive(c.exponents.irs_dt, "IRS->DT exponent");
    if (!(c.geometry.cluster_radius >= 0.0))
        throw ConfigError(Kind::positivity, "cluster_radius must be non-negative");

    // Every link distance must be strictly positive.
    const auto &g = c.geometry;
    const double r = g.cluster_radius;
    if (distance(g.st_center, g.irs_position) <= r || distance(g.dt_center, g.irs_position) <= r ||
        distance(g.st_center, g.dt_center) <= 2.0 * r)
        throw ConfigError(Kind::positivity, "terminal discs must not contain the IRS or overlap each other");

    if (c.Q && (*c.Q < 1 || *c.Q > c.M))
        throw ConfigError(Kind::budget, "module budget Q = " + std::to_string(*c.Q) + " outside [1, M]");
    return c;
}

Eigen::VectorBlock<CVector> block_view(CVector &v, int m, int L)
{
    if (L < 1 || m < 0 || (m + 1) * static_cast<Eigen::Index>(L) > v.size())
        throw std::out_of_range("module index " + std::to_string(m) + " out of range");
    return v.segment(static_cast<Eigen::Index>(m) * L, L);
}

Eigen::VectorBlock<const CVector> block_view(const CVector &v, int m, int L)
{
    if (L < 1 || m < 0 || (m + 1) * static_cast<Eigen::Index>(L) > v.size())
        throw std::out_of_range("module index " + std::to_string(m) + " out of range");
    return v.segment(static_cast<Eigen::Index>(m) * L, L);
}

Eigen::Map<RVector> real_view(CVector &v) { return {reinterpret_cast<double *>(v.data()), 2 * v.size()}; }

Eigen::Map<const RVector> real_view(const CVector &v)
{
    return {reinterpret_cast<const double *>(v.data()), 2 * v.size()};
}

int ModuleMask::cardinality() const { return static_cast<int>(std::count(active.begin(), active.end(), true)); }

std::vector<int> ModuleMask::indices() const
{
    std::vector<int> out;
    for (int m = 0; m < size(); ++m)
        if (active[static_cast<std::size_t>(m)])
            out.push_back(m);
    return out;
}

ModuleMask ModuleMask::from_indices(int M, const std::vector<int> &idx)
{
    ModuleMask mask(M);
    for (int m : idx)
    {
        if (m < 0 || m >= M)
            throw std::out_of_range("module index " + std::to_string(m) + " out of range");
        mask.active[static_cast<std::size_t>(m)] = true;
    }
    return mask;
}

PhaseProfile::PhaseProfile(CVector phi, int L) : phi_(std::move(phi)), L_(L)
{
    if (L < 1 || phi_.size() % L != 0)
        throw std::invalid_argument("phase vector length is not a multiple of L");
}

void PhaseProfile::restrict_to(const ModuleMask &mask)
{
    if (mask.size() != M())
        throw std::invalid_argument("mask size differs from module count");
    for (int m = 0; m < M(); ++m)
        if (!mask.active[static_cast<std::size_t>(m)])
            block(m).setZero();
}

double PhaseProfile::max_magnitude() const { return phi_.size() == 0 ? 0.0 : phi_.cwiseAbs().maxCoeff(); }

bool PhaseProfile::magnitudes_ok(double tol) const { return max_magnitude() <= 1.0 + tol; }

bool PowerAllocation::within(const std::vector<double> &p_max, double tol) const
{
    if (static_cast<std::size_t>(p.size()) != p_max.size())
        return false;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p[k] < -tol || p[k] > p_max[static_cast<std::size_t>(k)] * (1.0 + tol) + tol)
            return false;
    return true;
}

RVector row_block_norms(const CMatrix &phi_bar, int L)
{
    const Eigen::Index M = phi_bar.rows() / L;
    RVector norms(M);
    for (Eigen::Index m = 0; m < M; ++m)
        norms[m] = phi_bar.middleRows(m * L, L).stableNorm(); // no underflow for tiny blocks
    return norms;
}

double mixed_norm(const CMatrix &phi_bar, int L) { return row_block_norms(phi_bar, L).sum(); }

} // namespace irsra
