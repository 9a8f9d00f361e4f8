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
// irsra: Monte-Carlo sweeps and verification batteries from the command line.
#include "irsra/channel.hpp"
#include "irsra/config_json.hpp"
#include "irsra/conic.hpp"
#include "irsra/harness.hpp"
#include "verify/batteries.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int simulate(const std::string &config_path, const std::string &deltas, int realizations, std::uint64_t seed,
             const std::string &schemes, const std::string &out, int jobs, double gamma_tol, bool dump_channels)
{
    irsra::ExperimentSpec spec;
    spec.config = config_path.empty() ? irsra::reference_config() : irsra::load_config(config_path);
    spec.delta_grid = irsra::parse_delta_grid(deltas);
    spec.n_realizations = realizations;
    spec.master_seed = seed;
    spec.schemes = irsra::parse_schemes(schemes);
    spec.output_dir = out;
    spec.jobs = jobs;
    spec.gamma_tol = gamma_tol;
    irsra::validate(spec);

    const auto records = irsra::run_sweep(spec);
    irsra::write_outputs(spec, records);
    if (dump_channels)
    {
        std::ofstream f(spec.output_dir / "channels.csv", std::ios::binary);
        irsra::write_channel_csv_header(f);
        for (int r = 0; r < spec.n_realizations; ++r)
        {
            const std::uint64_t s = irsra::realization_seed(seed, r);
            irsra::write_channel_csv(f, r, irsra::draw_channels(spec.config, irsra::place_terminals(spec.config, s), s));
        }
    }
    int failed = 0;
    for (const auto &r : records)
        failed += r.ok() ? 0 : 1;
    std::cout << records.size() << " records written to " << spec.output_dir.string() << " (" << failed
              << " failed)\n";
    return 0;
}

int check(const std::string &suite, const irsra::verify::AcceptanceOptions &opt)
{
    irsra::verify::AcceptanceRunner runner(opt);
    int failed = 0;
    const auto ids = irsra::verify::suite_ids(suite);
    for (int id : ids)
    {
        const auto r = runner.run(id);
        std::cout << irsra::verify::format_result(r) << std::endl;
        failed += r.pass ? 0 : 1;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

int solve_dump(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    const auto problem = irsra::conic::read_problem(in);
    const auto rep = irsra::conic::solve(problem);
    std::cout << "status " << irsra::conic::to_string(rep.status) << "\nobjective " << rep.objective_value
              << "\niterations " << rep.iterations << "\nmax_primal_residual " << rep.max_primal_residual
              << "\nmax_cone_violation " << rep.max_cone_violation << "\n";
    return rep.status == irsra::conic::SolveStatus::optimal ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"IRS module selection and max-min SINR simulation"};
    app.require_subcommand(1);

    auto *sim = app.add_subcommand("simulate", "Monte-Carlo sweep over the sparsity budget");
    std::string config_path, deltas, schemes = "proposed,mrs,no_irs", out = "out";
    int realizations = 200, jobs = 1;
    std::uint64_t seed = 1;
    double gamma_tol = 1e-2;
    bool dump_channels = false;
    sim->add_option("--config", config_path, "network config JSON (reference scenario when omitted)")
        ->check(CLI::ExistingFile);
    sim->add_option("--deltas", deltas, "lo:hi:step or a single value")->required();
    sim->add_option("--realizations", realizations, "channel realizations")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--schemes", schemes, "comma list of proposed, mrs, no_irs");
    sim->add_option("--out", out, "output directory");
    sim->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--gamma-tol", gamma_tol, "relative bisection width")->check(CLI::PositiveNumber);
    sim->add_flag("--dump-channels", dump_channels, "also write channels.csv");

    auto *chk = app.add_subcommand("check", "run verification batteries");
    std::string suite = "invariants";
    irsra::verify::AcceptanceOptions opt;
    chk->add_option("--suite", suite, "invariants, oracle, sweep or all");
    chk->add_option("--seed", opt.seed, "seed");
    chk->add_option("--realizations", opt.sweep_realizations, "sweep size")->check(CLI::PositiveNumber);
    chk->add_option("--L", opt.sweep_L, "elements per module in the sweep")->check(CLI::PositiveNumber);
    chk->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    chk->add_option("--work-dir", opt.work_dir, "where sweep CSVs go");

    auto *slv = app.add_subcommand("solve", "solve a dumped conic problem");
    std::string problem_path;
    slv->add_option("file", problem_path, "problem in the plain-text conic format")->required();

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*sim)
            return simulate(config_path, deltas, realizations, seed, schemes, out, jobs, gamma_tol, dump_channels);
        if (*chk)
            return check(suite, opt);
        return solve_dump(problem_path);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
