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
#include "irsra/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace irsra {

CVector AggregateH::stacked(int k) const
{
    CVector out(static_cast<Eigen::Index>(K_) * N_);
    for (int j = 0; j < K_; ++j)
        out.segment(static_cast<Eigen::Index>(j) * N_, N_) = at(j, k);
    return out;
}

AggregateH precompute(const ChannelSet &ch)
{
    const int K = ch.K();
    const int N = ch.N();
    AggregateH agg(K, N);
    for (int k = 0; k < K; ++k)
    {
        const CVector gc = ch.g[static_cast<std::size_t>(k)].conjugate();
        for (int j = 0; j < K; ++j)
            agg.at(j, k) = gc.cwiseProduct(ch.h[static_cast<std::size_t>(j)]);
    }
    return agg;
}

Complex cascade(const ChannelSet &ch, const CVector &phi, int j, int k)
{
    const auto &g = ch.g[static_cast<std::size_t>(k)];
    const auto &h = ch.h[static_cast<std::size_t>(j)];
    Complex acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < phi.size(); ++n)
        acc += std::conj(g[n]) * phi[n] * h[n];
    return acc;
}

RMatrix effective_gains(const ChannelSet &ch, const CVector &phi)
{
    const int K = ch.K();
    RMatrix G(K, K);
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
            G(j, k) = std::norm(cascade(ch, phi, j, k));
    return G;
}

RVector sinr_from_gains(const RMatrix &G, const RVector &p, double sigma2)
{
    const Eigen::Index K = G.rows();
    RVector out(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        double interference = 0.0;
        for (Eigen::Index j = 0; j < K; ++j)
            if (j != k)
                interference += p[j] * G(j, k);
        out[k] = p[k] * G(k, k) / (interference + sigma2);
    }
    return out;
}

double sinr_direct(const ChannelSet &ch, const PhaseProfile &phases, const PowerAllocation &powers, double sigma2,
                   int k)
{
    double interference = 0.0;
    for (int j = 0; j < ch.K(); ++j)
        if (j != k)
            interference += powers.p[j] * std::norm(cascade(ch, phases.phi(), j, k));
    return powers.p[k] * std::norm(cascade(ch, phases.phi(), k, k)) / (interference + sigma2);
}

RVector sinr_direct_all(const ChannelSet &ch, const PhaseProfile &phases, const PowerAllocation &powers,
                        double sigma2)
{
    return sinr_from_gains(effective_gains(ch, phases.phi()), powers.p, sigma2);
}

RVector sinr_quadratic(const AggregateH &agg, const CMatrix &phi_bar, double sigma2)
{
    const int K = agg.K();
    RVector out(K);
    for (int k = 0; k < K; ++k)
    {
        double interference = 0.0;
        for (int j = 0; j < K; ++j)
            if (j != k)
                interference += std::norm(agg.at(j, k).dot(phi_bar.col(j))); // dot() conjugates the left side
        out[k] = std::norm(agg.at(k, k).dot(phi_bar.col(k))) / (sigma2 + interference);
    }
    return out;
}

double sum_rate(const RVector &sinrs)
{
    double r = 0.0;
    for (double s : sinrs)
        r += std::log2(1.0 + s);
    return r;
}

double total_power(const PowerAllocation &powers, const ModuleMask &mask, const NetworkConfig &c)
{
    const auto &pm = c.power_model;
    return pm.xi_st * powers.total() + c.K * pm.p_st_w + c.K * pm.p_dt_w + mask.cardinality() * pm.module_power(c.L);
}

double energy_efficiency(double rate, double power)
{
    if (!(power > 0.0))
        throw std::domain_error("energy_efficiency: total power must be positive");
    return rate / power;
}

} // namespace irsra
