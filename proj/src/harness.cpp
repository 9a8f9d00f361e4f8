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
#include "irsra/harness.hpp"
#include "irsra/channel.hpp"
#include "irsra/config_json.hpp"
#include "irsra/csv.hpp"
#include "irsra/metrics.hpp"
#include "irsra/random.hpp"
#include "irsra/sparsity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace irsra {

namespace {

struct Realization
{
    std::uint64_t seed;
    ChannelSet channels;
};

Realization draw(const ExperimentSpec &spec, int r)
{
    const std::uint64_t seed = realization_seed(spec.master_seed, r);
    const Geometry geo = place_terminals(spec.config, seed);
    return {seed, draw_channels(spec.config, geo, seed)};
}

// Both IRS schemes start algorithm1 from the same phases so the comparison is paired.
std::uint64_t init_seed(std::uint64_t realization_seed)
{
    return derive_seed(realization_seed, {tag(StreamTag::init_phase)});
}

void fill_metrics(SweepRecord &rec, const ChannelSet &ch, const PhaseProfile &phases, const PowerAllocation &powers,
                  const ModuleMask &mask, const NetworkConfig &config)
{
    const RVector sinrs = sinr_direct_all(ch, phases, powers, config.sigma2_w);
    rec.max_min_sinr = sinrs.minCoeff();
    rec.max_min_sinr_db = 10.0 * std::log10(std::max(rec.max_min_sinr, 1e-30));
    rec.n_active_modules = mask.cardinality();
    rec.total_transmit_power_w = powers.total();
    rec.total_power_w = total_power(powers, mask, config);
    rec.sum_rate = sum_rate(sinrs);
    rec.ee = energy_efficiency(rec.sum_rate, rec.total_power_w);
}

// algorithm1 runs memoized by mask; the init seed is fixed per realization.
class MaskRuns
{
public:
    MaskRuns(const ExperimentSpec &spec, const Realization &real) : spec_(spec), real_(real) {}

    const AltOptState &get(const ModuleMask &mask)
    {
        auto it = runs_.find(mask.active);
        if (it == runs_.end())
            it = runs_.emplace(mask.active, algorithm1(real_.channels, mask, spec_.config, init_seed(real_.seed),
                                                       spec_.altopt))
                     .first;
        return it->second;
    }

private:
    const ExperimentSpec &spec_;
    const Realization &real_;
    std::map<std::vector<bool>, AltOptState> runs_;
};

SweepRecord base_record(Scheme s, double delta, int r)
{
    SweepRecord rec;
    rec.scheme = s;
    rec.delta = delta;
    rec.realization = r;
    return rec;
}

void record_mask_run(SweepRecord &rec, MaskRuns &runs, const ModuleMask &mask, const ExperimentSpec &spec,
                     const Realization &real)
{
    const AltOptState &st = runs.get(mask);
    fill_metrics(rec, real.channels, st.phases, st.powers, mask, spec.config);
}

std::vector<SweepRecord> proposed_impl(const ExperimentSpec &spec, int r, const Realization &real, MaskRuns &runs)
{
    const AggregateH agg = precompute(real.channels);
    FeasibilityCache cache;
    std::vector<SweepRecord> out;
    // gamma* grows with delta, so the last result is a feasible lower end
    double known_feasible = 0.0;
    double last_delta = 0.0;
    for (double delta : spec.delta_grid)
    {
        SweepRecord rec = base_record(Scheme::proposed, delta, r);
        try
        {
            SparsityParams params = SparsityParams::from_delta(delta);
            params.gamma_tol = spec.gamma_tol;
            params.gamma_lo = delta >= last_delta ? known_feasible : 0.0;
            const SparseSolution sol = bisect_gamma(agg, spec.config, params, &cache);
            known_feasible = sol.gamma;
            last_delta = delta;
            rec.gamma_relaxed = sol.gamma;
            const ModuleSelection sel = identify_modules(sol, spec.config, params);
            if (sel.degenerate || sel.mask.cardinality() == 0)
                rec.failure = "degenerate_mask";
            else
                record_mask_run(rec, runs, sel.mask, spec, real);
        }
        catch (const SolverFailure &)
        {
            rec.failure = "solver_failure";
        }
        catch (const BracketFailure &)
        {
            rec.failure = "bracket_failure";
        }
        out.push_back(std::move(rec));
    }
    return out;
}

ModuleMask random_subset(int M, int card, std::uint64_t seed)
{
    std::vector<int> idx(static_cast<std::size_t>(M));
    std::iota(idx.begin(), idx.end(), 0);
    RandomStream rng(seed);
    for (int i = 0; i < card; ++i)
    {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(M - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(card));
    return ModuleMask::from_indices(M, idx);
}

std::vector<SweepRecord> mrs_impl(const ExperimentSpec &spec, int r, const Realization &real, MaskRuns &runs,
                                  const std::vector<SweepRecord> &proposed)
{
    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < spec.delta_grid.size(); ++i)
    {
        const double delta = spec.delta_grid[i];
        SweepRecord rec = base_record(Scheme::mrs, delta, r);
        const SweepRecord &ref = proposed.at(i);
        if (!ref.ok())
            rec.failure = "paired_" + ref.failure;
        else
        {
            const std::uint64_t s = derive_seed(real.seed, {tag(StreamTag::mrs_subset), i});
            record_mask_run(rec, runs, random_subset(spec.config.M, ref.n_active_modules, s), spec, real);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<SweepRecord> no_irs_impl(const ExperimentSpec &spec, int r, const Realization &real)
{
    const NetworkConfig &c = spec.config;
    RMatrix G(c.K, c.K);
    for (int j = 0; j < c.K; ++j)
        for (int k = 0; k < c.K; ++k)
            G(j, k) = std::norm(real.channels.direct(j, k));
    RVector p0(c.K);
    for (int k = 0; k < c.K; ++k)
        p0[k] = 0.5 * c.p_max_w[static_cast<std::size_t>(k)];
    PowerAllocation pw;
    pw.p = optimize_powers(G, c.p_max_w, c.sigma2_w, p0, spec.altopt);

    SweepRecord rec = base_record(Scheme::no_irs, 0.0, r);
    const RVector sinrs = sinr_from_gains(G, pw.p, c.sigma2_w);
    const ModuleMask none(c.M);
    rec.max_min_sinr = sinrs.minCoeff();
    rec.max_min_sinr_db = 10.0 * std::log10(std::max(rec.max_min_sinr, 1e-30));
    rec.n_active_modules = 0;
    rec.total_transmit_power_w = pw.total();
    rec.total_power_w = total_power(pw, none, c);
    rec.sum_rate = sum_rate(sinrs);
    rec.ee = energy_efficiency(rec.sum_rate, rec.total_power_w);

    std::vector<SweepRecord> out;
    for (double delta : spec.delta_grid)
    {
        rec.delta = delta;
        out.push_back(rec);
    }
    return out;
}

double pick(const SweepRecord &r, Figure f)
{
    switch (f)
    {
    case Figure::a_sinr:
        return r.max_min_sinr;
    case Figure::b_modules:
        return r.n_active_modules;
    case Figure::c_power:
        return r.total_transmit_power_w;
    case Figure::d_ee:
        return r.ee;
    }
    return 0.0;
}

} // namespace

std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::proposed:
        return "proposed";
    case Scheme::mrs:
        return "mrs";
    case Scheme::no_irs:
        return "no_irs";
    }
    return "?";
}

Scheme scheme_from_string(const std::string &name)
{
    if (name == "proposed")
        return Scheme::proposed;
    if (name == "mrs")
        return Scheme::mrs;
    if (name == "no_irs")
        return Scheme::no_irs;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<Scheme> parse_schemes(const std::string &list)
{
    std::vector<Scheme> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        const Scheme s = scheme_from_string(item);
        if (std::find(out.begin(), out.end(), s) == out.end())
            out.push_back(s);
    }
    if (out.empty())
        throw std::invalid_argument("no schemes given");
    return out;
}

std::vector<double> parse_delta_grid(const std::string &range)
{
    std::vector<double> parts;
    std::stringstream ss(range);
    std::string item;
    while (std::getline(ss, item, ':'))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw std::invalid_argument("bad number '" + item + "' in delta range");
        parts.push_back(v);
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3)
        throw std::invalid_argument("delta range must be lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo)
        throw std::invalid_argument("delta range needs step > 0 and hi >= lo");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

void validate(const ExperimentSpec &spec)
{
    if (spec.delta_grid.empty())
        throw std::invalid_argument("empty delta grid");
    for (double d : spec.delta_grid)
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("delta values must be positive");
    if (spec.n_realizations < 1)
        throw std::invalid_argument("need at least one realization");
    if (spec.jobs < 1)
        throw std::invalid_argument("jobs must be at least 1");
    if (spec.schemes.empty())
        throw std::invalid_argument("no schemes selected");
}

std::uint64_t realization_seed(std::uint64_t master_seed, int r)
{
    return derive_seed(master_seed, {tag(StreamTag::realization), static_cast<std::uint64_t>(r)});
}

std::vector<SweepRecord> run_proposed(const ExperimentSpec &spec, int r)
{
    const Realization real = draw(spec, r);
    MaskRuns runs(spec, real);
    return proposed_impl(spec, r, real, runs);
}

std::vector<SweepRecord> run_mrs(const ExperimentSpec &spec, int r, const std::vector<SweepRecord> *proposed)
{
    const Realization real = draw(spec, r);
    MaskRuns runs(spec, real);
    if (proposed)
        return mrs_impl(spec, r, real, runs, *proposed);
    const std::vector<SweepRecord> own = proposed_impl(spec, r, real, runs);
    return mrs_impl(spec, r, real, runs, own);
}

std::vector<SweepRecord> run_no_irs(const ExperimentSpec &spec, int r)
{
    return no_irs_impl(spec, r, draw(spec, r));
}

std::vector<SweepRecord> run_realization(const ExperimentSpec &spec, int r)
{
    const Realization real = draw(spec, r);
    MaskRuns runs(spec, real);
    const bool want_proposed = std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::proposed) != spec.schemes.end();
    const bool want_mrs = std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::mrs) != spec.schemes.end();
    std::vector<SweepRecord> proposed;
    if (want_proposed || want_mrs)
        proposed = proposed_impl(spec, r, real, runs);

    std::vector<SweepRecord> out;
    for (Scheme s : spec.schemes)
    {
        std::vector<SweepRecord> part;
        if (s == Scheme::proposed)
            part = proposed;
        else if (s == Scheme::mrs)
            part = mrs_impl(spec, r, real, runs, proposed);
        else
            part = no_irs_impl(spec, r, real);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<SweepRecord> run_sweep(const ExperimentSpec &spec)
{
    validate(spec);
    std::vector<std::vector<SweepRecord>> slots(static_cast<std::size_t>(spec.n_realizations));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int r = next++; r < spec.n_realizations; r = next++)
        {
            try
            {
                slots[static_cast<std::size_t>(r)] = run_realization(spec, r);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    const int jobs = std::min(spec.jobs, spec.n_realizations);
    if (jobs == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
    std::vector<SweepRecord> out;
    for (auto &s : slots)
        out.insert(out.end(), s.begin(), s.end());
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRecord> &records, Figure figure)
{
    struct Acc
    {
        std::vector<double> values;
        int failures = 0;
    };
    std::vector<std::pair<Scheme, double>> order;
    std::map<std::pair<int, double>, Acc> acc;
    for (const auto &r : records)
    {
        const auto key = std::make_pair(static_cast<int>(r.scheme), r.delta);
        auto it = acc.find(key);
        if (it == acc.end())
        {
            order.emplace_back(r.scheme, r.delta);
            it = acc.emplace(key, Acc{}).first;
        }
        if (r.ok())
            it->second.values.push_back(pick(r, figure));
        else
            ++it->second.failures;
    }
    std::vector<AggregateRow> out;
    for (const auto &[scheme, delta] : order)
    {
        const Acc &a = acc.at({static_cast<int>(scheme), delta});
        AggregateRow row;
        row.scheme = scheme;
        row.delta = delta;
        row.n = static_cast<int>(a.values.size());
        row.failures = a.failures;
        if (row.n > 0)
        {
            double sum = 0.0;
            for (double v : a.values)
                sum += v;
            row.mean = sum / row.n;
            if (row.n > 1)
            {
                double ss = 0.0;
                for (double v : a.values)
                    ss += (v - row.mean) * (v - row.mean);
                row.stderr_ = std::sqrt(ss / (row.n - 1) / row.n);
            }
        }
        out.push_back(row);
    }
    return out;
}

void write_records_csv(std::ostream &out, const std::vector<SweepRecord> &records)
{
    write_csv_row(out, {"scheme", "delta", "realization", "max_min_sinr", "max_min_sinr_db", "n_active_modules",
                        "total_transmit_power_w", "total_power_w", "sum_rate", "ee", "gamma_relaxed", "failure"});
    for (const auto &r : records)
        write_csv_row(out, {to_string(r.scheme), format_double(r.delta), std::to_string(r.realization),
                            format_double(r.max_min_sinr), format_double(r.max_min_sinr_db),
                            std::to_string(r.n_active_modules), format_double(r.total_transmit_power_w),
                            format_double(r.total_power_w), format_double(r.sum_rate), format_double(r.ee),
                            format_double(r.gamma_relaxed), r.failure});
}

void write_figure_csv(std::ostream &out, const std::vector<AggregateRow> &rows)
{
    write_csv_row(out, {"scheme", "delta", "mean", "stderr", "n"});
    for (const auto &r : rows)
        write_csv_row(out, {to_string(r.scheme), format_double(r.delta), format_double(r.mean),
                            format_double(r.stderr_), std::to_string(r.n)});
}

void write_outputs(const ExperimentSpec &spec, const std::vector<SweepRecord> &records)
{
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    auto open = [&](const char *name) {
        std::ofstream f(spec.output_dir / name, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + (spec.output_dir / name).string());
        return f;
    };
    {
        auto f = open("records.csv");
        write_records_csv(f, records);
    }
    const std::pair<const char *, Figure> figs[] = {{"fig_a.csv", Figure::a_sinr},
                                                     {"fig_b.csv", Figure::b_modules},
                                                     {"fig_c.csv", Figure::c_power},
                                                     {"fig_d.csv", Figure::d_ee}};
    for (const auto &[name, fig] : figs)
    {
        auto f = open(name);
        write_figure_csv(f, aggregate(records, fig));
    }

    nlohmann::json meta;
    meta["config"] = config_to_json(spec.config);
    meta["delta_grid"] = spec.delta_grid;
    meta["n_realizations"] = spec.n_realizations;
    meta["master_seed"] = spec.master_seed;
    std::vector<std::string> names;
    for (Scheme s : spec.schemes)
        names.push_back(to_string(s));
    meta["schemes"] = names;
    meta["gamma_tol"] = spec.gamma_tol;
    meta["delta_upper_bound"] = delta_upper_bound(spec.config);
    meta["no_irs_powers"] = "optimized by the max-min power iteration";
    meta["fig_a_quantity"] = "max-min SINR, linear";
    meta["fig_c_quantity"] = "sum of transmit powers, W";
    meta["fig_d_quantity"] = "mean of per-realization EE, bit/J/Hz";
    int failures = 0;
    for (const auto &r : records)
        failures += r.ok() ? 0 : 1;
    meta["failed_records"] = failures;
    auto f = open("metadata.json");
    f << meta.dump(2) << '\n';
}

} // namespace irsra
