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

#include <vector>

namespace irsra {

/// Cascaded channels hbar_{j,k} = diag(g_k^H) h_j, i.e. hbar_{j,k}[n] = conj(g_k[n]) h_j[n].
class AggregateH
{
public:
    AggregateH() = default;
    AggregateH(int K, int N) : K_(K), N_(N), hbar_(static_cast<std::size_t>(K * K), CVector::Zero(N)) {}

    int K() const { return K_; }
    int N() const { return N_; }

    /// Cascade from ST j to DT k (0-based).
    const CVector &at(int j, int k) const { return hbar_[index(j, k)]; }
    CVector &at(int j, int k) { return hbar_[index(j, k)]; }

    /// Stacked [hbar_{1,k}; ...; hbar_{K,k}] of length K*N.
    CVector stacked(int k) const;

private:
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(j * K_ + k); }

    int K_ = 0;
    int N_ = 0;
    std::vector<CVector> hbar_;
};

AggregateH precompute(const ChannelSet &channels);

/// Effective cascaded gain g_k^H diag(phi) h_j.
Complex cascade(const ChannelSet &channels, const CVector &phi, int j, int k);

/// Power gain matrix G(j, k) = |g_k^H diag(phi) h_j|^2 (ST j -> DT k).
RMatrix effective_gains(const ChannelSet &channels, const CVector &phi);

/// SINR at DT k from p_k |g_k^H Phi h_k|^2 / (sum_{j!=k} p_j |g_k^H Phi h_j|^2 + sigma2).
double sinr_direct(const ChannelSet &channels, const PhaseProfile &phases, const PowerAllocation &powers,
                   double sigma2, int k);
RVector sinr_direct_all(const ChannelSet &channels, const PhaseProfile &phases, const PowerAllocation &powers,
                        double sigma2);

/// SINR for a gain matrix G(j, k) and powers p.
RVector sinr_from_gains(const RMatrix &gains, const RVector &p, double sigma2);

/// Quadratic-form SINR for every k with phi_bar columns phi_bar_k:
///   |hbar_{k,k}^H phi_bar_k|^2 / (sigma2 + sum_{j!=k} |hbar_{j,k}^H phi_bar_j|^2).
/// Matches sinr_direct when phi_bar_k = sqrt(p_k) conj(phi) (not checked), since
/// g_k^H diag(phi) h_j = hbar_{j,k}^T phi = conj(hbar_{j,k}^H conj(phi)).
RVector sinr_quadratic(const AggregateH &aggregate, const CMatrix &phi_bar, double sigma2);

/// Sum spectral efficiency sum_k log2(1 + SINR_k), bits/s/Hz.
double sum_rate(const RVector &sinrs);

/// xi_ST sum p_k + K P_ST + K P_DT + card(mask) P(L), watts.
double total_power(const PowerAllocation &powers, const ModuleMask &mask, const NetworkConfig &config);

/// sum_rate / total_power in bits/Joule/Hz. Throws std::domain_error if total_power <= 0.
double energy_efficiency(double sum_rate, double total_power);

} // namespace irsra
