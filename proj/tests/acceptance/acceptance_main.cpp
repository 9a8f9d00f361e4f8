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
// Runs every acceptance criterion at its stated tolerance, one line each.
#include "verify/batteries.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <thread>

int main(int argc, char **argv)
{
    irsra::verify::AcceptanceOptions opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<int> only;

    CLI::App app{"acceptance criteria"};
    app.add_option("--seed", opt.seed, "master seed");
    app.add_option("--realizations", opt.sweep_realizations, "Monte-Carlo sweep size")->check(CLI::PositiveNumber);
    app.add_option("--L", opt.sweep_L, "elements per module in the sweep")->check(CLI::PositiveNumber);
    app.add_option("--jobs", opt.jobs, "worker threads for the sweep")->check(CLI::PositiveNumber);
    app.add_option("--work-dir", opt.work_dir, "where the sweep CSVs go");
    app.add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    if (only.empty())
        only = irsra::verify::suite_ids("all");
    irsra::verify::AcceptanceRunner runner(opt);
    int failed = 0;
    for (int id : only)
    {
        irsra::verify::CriterionResult r;
        try
        {
            r = runner.run(id);
        }
        catch (const std::exception &e)
        {
            r.id = id;
            r.title = "criterion";
            r.detail = std::string("threw: ") + e.what();
        }
        std::cout << irsra::verify::format_result(r) << std::endl;
        failed += r.pass ? 0 : 1;
    }
    std::cout << (only.size() - failed) << "/" << only.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
