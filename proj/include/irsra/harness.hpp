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

#include "irsra/altopt.hpp"
#include "irsra/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace irsra {

enum class Scheme
{
    proposed,
    mrs,
    no_irs
};

std::string to_string(Scheme s);
/// Throws std::invalid_argument for an unknown name.
Scheme scheme_from_string(const std::string &name);
/// Comma-separated list such as "proposed,mrs,no_irs".
std::vector<Scheme> parse_schemes(const std::string &list);
/// "lo:hi:step", inclusive of hi up to rounding. Throws std::invalid_argument.
std::vector<double> parse_delta_grid(const std::string &range);

struct ExperimentSpec
{
    NetworkConfig config;
    std::vector<double> delta_grid;
    int n_realizations = 200;
    std::uint64_t master_seed = 1;
    std::vector<Scheme> schemes{Scheme::proposed, Scheme::mrs, Scheme::no_irs};
    std::filesystem::path output_dir = "out";
    int jobs = 1;           // worker threads; output does not depend on it
    double gamma_tol = 1e-2; // relative bisection width used in sweeps
    AltOptSettings altopt;
};

/// Throws std::invalid_argument for an empty or non-positive grid, n_realizations < 1 or jobs < 1.
void validate(const ExperimentSpec &spec);

struct SweepRecord
{
    Scheme scheme = Scheme::proposed;
    double delta = 0.0;
    int realization = 0;
    double max_min_sinr = 0.0;
    double max_min_sinr_db = 0.0;
    int n_active_modules = 0;
    double total_transmit_power_w = 0.0; // sum of p_k
    double total_power_w = 0.0;          // with circuit and module power
    double sum_rate = 0.0;
    double ee = 0.0;
    double gamma_relaxed = 0.0; // bisection result, proposed scheme only
    std::string failure;        // empty when the run succeeded

    bool ok() const { return failure.empty(); }
};

/// Seed of realization r: derive_seed(master, {realization, r}).
std::uint64_t realization_seed(std::uint64_t master_seed, int realization);

/// One record per delta for the proposed pipeline on realization r.
std::vector<SweepRecord> run_proposed(const ExperimentSpec &spec, int realization);

/// Random modules with the proposed scheme's cardinality per delta. When
/// `proposed` is null the proposed pipeline is run first to get it.
std::vector<SweepRecord> run_mrs(const ExperimentSpec &spec, int realization,
                                 const std::vector<SweepRecord> *proposed = nullptr);

/// Direct links only with optimized powers, replicated across the grid.
std::vector<SweepRecord> run_no_irs(const ExperimentSpec &spec, int realization);

/// Every requested scheme for realization r, schemes in spec order.
std::vector<SweepRecord> run_realization(const ExperimentSpec &spec, int realization);

/// All realizations, ordered by (realization, scheme, delta) regardless of jobs.
std::vector<SweepRecord> run_sweep(const ExperimentSpec &spec);

struct AggregateRow
{
    Scheme scheme = Scheme::proposed;
    double delta = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
    int n = 0;        // successful realizations
    int failures = 0; // excluded realizations
};

enum class Figure
{
    a_sinr,    // max-min SINR, linear
    b_modules, // active modules
    c_power,   // total transmit power, W
    d_ee       // energy efficiency, bit/J/Hz
};

/// Means and standard errors per (scheme, delta) over successful records,
/// in order of first appearance. EE is averaged per realization.
std::vector<AggregateRow> aggregate(const std::vector<SweepRecord> &records, Figure figure);

void write_records_csv(std::ostream &out, const std::vector<SweepRecord> &records);
void write_figure_csv(std::ostream &out, const std::vector<AggregateRow> &rows);

/// records.csv, fig_a.csv .. fig_d.csv and metadata.json under output_dir.
void write_outputs(const ExperimentSpec &spec, const std::vector<SweepRecord> &records);

} // namespace irsra
