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

// The ten acceptance criteria as runnable checks. Shared by the acceptance
// binary (all of them) and `irsra check` (named subsets).

#include "irsra/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace irsra::verify {

struct CriterionResult
{
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions
{
    std::uint64_t seed = 20240611;
    int sweep_realizations = 200;
    int sweep_L = 20; // 4 is the documented fallback when the full size is too slow
    int jobs = 1;
    std::filesystem::path work_dir = "acceptance_out";
};

class AcceptanceRunner
{
public:
    explicit AcceptanceRunner(AcceptanceOptions options) : opt_(std::move(options)) {}

    CriterionResult run(int id);
    /// The Monte-Carlo sweep behind criteria 7 and 8, run once and kept.
    const std::vector<SweepRecord> &sweep();
    ExperimentSpec sweep_spec() const;

private:
    CriterionResult form_equivalence();
    CriterionResult conic_oracle();
    CriterionResult bisection_soundness();
    CriterionResult brute_force_selection();
    CriterionResult single_pair();
    CriterionResult monotone_ascent();
    CriterionResult module_trend();
    CriterionResult ordering();
    CriterionResult power_arithmetic();
    CriterionResult determinism();

    AcceptanceOptions opt_;
    std::optional<std::vector<SweepRecord>> sweep_;
    double sweep_seconds_ = 0.0;
};

/// "invariants", "oracle", "sweep" or "all". Throws std::invalid_argument otherwise.
std::vector<int> suite_ids(const std::string &suite);

/// "[PASS] 3 bisection soundness: detail (1.2 s)"
std::string format_result(const CriterionResult &r);

} // namespace irsra::verify
