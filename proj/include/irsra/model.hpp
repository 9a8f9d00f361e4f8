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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/*!
Domain types shared by every module.

Index convention: documentation follows the usual 1-based numbering
(module m = 1..M, element n = 1..N, pair k = 1..K). Every API in this
library takes 0-based indices, so module m in the docs is index m-1 in
code and occupies elements [(m-1)L, mL).
*/
namespace irsra {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Magnitude slack allowed on reflection coefficients, |phi_n| <= 1 + kMagnitudeTol.
inline constexpr double kMagnitudeTol = 1e-8;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double x);

/// Raised by validate() and the JSON loader.
class ConfigError : public std::invalid_argument
{
public:
    enum class Kind
    {
        dimension,
        positivity,
        budget,
        schema
    };

    ConfigError(Kind kind, const std::string &what) : std::invalid_argument(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point &a, const Point &b);

struct GeometryConfig
{
    Point st_center{0.0, 0.0};
    Point dt_center{200.0, 0.0};
    double cluster_radius = 2.0;
    Point irs_position{120.0, 50.0};
};

struct PathLossExponents
{
    double direct = 3.5;
    double st_irs = 2.0;
    double irs_dt = 2.1;
};

struct PowerModel
{
    double p_st_w = 0.01;                 // static power per ST
    double p_dt_w = 0.01;                 // static power per DT
    double xi_st = 1.2;                   // circuit coefficient on transmit power
    double module_coeff_w = 0.01;         // watts per reflecting element of an active module

    double module_power(int L) const { return L * module_coeff_w; }
};

enum class VarianceModel
{
    reference_loss, // 10^(-ref/10) d^-exponent
    ratio200        // (200/d)^exponent
};

struct NetworkConfig
{
    int K = 5;
    int M = 10;
    int L = 20;
    int N = 200;
    std::vector<double> p_max_w = std::vector<double>(5, 0.1);
    double sigma2_w = 1e-12;
    std::optional<int> Q;
    double carrier_hz = 2.3e9;
    double bandwidth_hz = 10e6;
    GeometryConfig geometry;
    PathLossExponents exponents;
    double ref_loss_db = 30.0;
    PowerModel power_model;
    VarianceModel variance_model = VarianceModel::reference_loss;

    double max_p_max() const;
    double sigma() const;
};

/// The reference scenario: K=5, M=10, L=20, 20 dBm per ST, -90 dBm noise,
/// 2.3 GHz / 10 MHz, ST disc at (0,0), DT disc at (200,0), IRS at (120,50).
NetworkConfig reference_config();

/// Throws ConfigError unless every invariant holds; returns the config unchanged.
NetworkConfig validate(NetworkConfig config);

/// Per-pair channels. Module block m of h[k] and g[k] is the segment [mL, (m+1)L).
/// direct(j, k) is the ST j -> DT k gain, only used by the no-IRS baseline.
struct ChannelSet
{
    std::vector<CVector> h; // ST k -> IRS
    std::vector<CVector> g; // IRS -> DT k
    CMatrix direct;

    int K() const { return static_cast<int>(h.size()); }
    int N() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
};

/// Mutable view of module block m (0-based) of a length-M*L vector.
Eigen::VectorBlock<CVector> block_view(CVector &v, int m, int L);
Eigen::VectorBlock<const CVector> block_view(const CVector &v, int m, int L);

/// Interleaved real view (re_0, im_0, re_1, im_1, ...) of length 2N sharing storage with v.
Eigen::Map<RVector> real_view(CVector &v);
Eigen::Map<const RVector> real_view(const CVector &v);

struct ModuleMask
{
    std::vector<bool> active;

    ModuleMask() = default;
    explicit ModuleMask(int M, bool value = false) : active(static_cast<std::size_t>(M), value) {}

    int size() const { return static_cast<int>(active.size()); }
    int cardinality() const;
    std::vector<int> indices() const;
    bool operator==(const ModuleMask &) const = default;

    static ModuleMask all(int M) { return ModuleMask(M, true); }
    static ModuleMask from_indices(int M, const std::vector<int> &idx);
};

/// Reflection coefficients phi (length N = M*L). Blocks of inactive modules are zero.
class PhaseProfile
{
public:
    PhaseProfile() = default;
    PhaseProfile(CVector phi, int L);

    const CVector &phi() const { return phi_; }
    CVector &phi() { return phi_; }
    int L() const { return L_; }
    int M() const { return L_ > 0 ? static_cast<int>(phi_.size()) / L_ : 0; }

    Eigen::VectorBlock<CVector> block(int m) { return block_view(phi_, m, L_); }
    Eigen::VectorBlock<const CVector> block(int m) const { return block_view(phi_, m, L_); }

    /// Zero every block outside the mask.
    void restrict_to(const ModuleMask &mask);
    bool magnitudes_ok(double tol = kMagnitudeTol) const;
    double max_magnitude() const;

private:
    CVector phi_;
    int L_ = 1;
};

struct PowerAllocation
{
    RVector p;

    double total() const { return p.sum(); }
    bool within(const std::vector<double> &p_max, double tol = 0.0) const;
};

/// Relaxed solution of the group-sparse feasibility problem.
struct SparseSolution
{
    CMatrix phi_bar;     // N x K, column k is sqrt(p_k) * conj(phi) in the unrelaxed problem
    RVector block_norms; // ||row block m||_F, length M
    double gamma = 0.0;
    double alpha = 1.0;
    double objective = 0.0; // alpha * sum(block_norms)
};

/// Frobenius norms of the M row blocks of an (M*L) x K matrix.
RVector row_block_norms(const CMatrix &phi_bar, int L);

/// Mixed l_{1,F} norm: sum over modules of the Frobenius norm of each row block.
double mixed_norm(const CMatrix &phi_bar, int L);

} // namespace irsra
