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
#include "irsra/conic.hpp"
#include "irsra/csv.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace irsra::conic {

double SparseRow::dot(const RVector &x) const
{
    double acc = 0.0;
    for (const auto &[j, v] : terms)
        acc += v * x[j];
    return acc;
}

ConicProblem::ConicProblem(int n)
    : n_vars(n), objective(RVector::Zero(n)),
      lower(RVector::Constant(n, -std::numeric_limits<double>::infinity())),
      upper(RVector::Constant(n, std::numeric_limits<double>::infinity()))
{
}

void ConicProblem::add_halfspace(SparseRow row, double d)
{
    auto &c = add_soc();
    c.c_row = std::move(row);
    c.d = d;
}

void ConicProblem::set_bounds(int i, double lo, double hi)
{
    if (i < 0 || i >= n_vars)
        throw std::out_of_range("bound index out of range");
    lower[i] = lo;
    upper[i] = hi;
}

namespace {

void check_row(const SparseRow &r, int n, const char *what)
{
    for (const auto &[j, v] : r.terms)
        if (j < 0 || j >= n || !std::isfinite(v))
            throw std::invalid_argument(std::string("conic problem: bad entry in ") + what);
}

} // namespace

void ConicProblem::check() const
{
    if (n_vars < 1 || objective.size() != n_vars || lower.size() != n_vars || upper.size() != n_vars)
        throw std::invalid_argument("conic problem: inconsistent variable count");
    if (!objective.allFinite())
        throw std::invalid_argument("conic problem: non-finite objective");
    for (int i = 0; i < n_vars; ++i)
        if (lower[i] > upper[i] || std::isnan(lower[i]) || std::isnan(upper[i]))
            throw std::invalid_argument("conic problem: inverted bounds on variable " + std::to_string(i));
    for (const auto &c : soc_constraints)
    {
        if (c.a.size() != c.b.size())
            throw std::invalid_argument("conic problem: cone row count differs from offset length");
        for (const auto &r : c.a)
            check_row(r, n_vars, "cone row");
        for (double b : c.b)
            if (!std::isfinite(b))
                throw std::invalid_argument("conic problem: non-finite cone offset");
        check_row(c.c_row, n_vars, "cone bound row");
        if (!std::isfinite(c.d))
            throw std::invalid_argument("conic problem: non-finite cone constant");
    }
    for (const auto &e : eq_constraints)
    {
        check_row(e.row, n_vars, "equality");
        if (!std::isfinite(e.rhs))
            throw std::invalid_argument("conic problem: non-finite equality rhs");
    }
}

std::string to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::max_iterations:
        return "max_iterations";
    case SolveStatus::numerical_failure:
        return "numerical_failure";
    }
    return "unknown";
}

PointCheck check_point(const ConicProblem &p, const RVector &x)
{
    PointCheck out;
    for (const auto &e : p.eq_constraints)
        out.max_primal_residual = std::max(out.max_primal_residual, std::abs(e.row.dot(x) - e.rhs));
    for (int i = 0; i < p.n_vars; ++i)
    {
        out.max_primal_residual = std::max(out.max_primal_residual, p.lower[i] - x[i]);
        out.max_primal_residual = std::max(out.max_primal_residual, x[i] - p.upper[i]);
    }
    for (const auto &c : p.soc_constraints)
    {
        double sq = 0.0;
        for (std::size_t r = 0; r < c.a.size(); ++r)
        {
            const double v = c.a[r].dot(x) + c.b[r];
            sq += v * v;
        }
        out.max_cone_violation = std::max(out.max_cone_violation, std::sqrt(sq) - (c.c_row.dot(x) + c.d));
    }
    return out;
}

void write_problem(std::ostream &out, const ConicProblem &p)
{
    out << "conic 1\n";
    out << "vars " << p.n_vars << '\n';
    for (int i = 0; i < p.n_vars; ++i)
        if (p.objective[i] != 0.0)
            out << "obj " << i << ' ' << format_double(p.objective[i]) << '\n';
    for (int i = 0; i < p.n_vars; ++i)
        if (std::isfinite(p.lower[i]) || std::isfinite(p.upper[i]))
            out << "bound " << i << ' ' << format_double(p.lower[i]) << ' ' << format_double(p.upper[i]) << '\n';
    for (const auto &c : p.soc_constraints)
    {
        out << "soc " << c.a.size() << ' ' << format_double(c.d) << '\n';
        for (const auto &[j, v] : c.c_row.terms)
            out << "c " << j << ' ' << format_double(v) << '\n';
        for (std::size_t r = 0; r < c.a.size(); ++r)
        {
            out << "row " << r << ' ' << format_double(c.b[r]) << '\n';
            for (const auto &[j, v] : c.a[r].terms)
                out << "a " << j << ' ' << format_double(v) << '\n';
        }
    }
    for (const auto &e : p.eq_constraints)
    {
        out << "eq " << format_double(e.rhs) << '\n';
        for (const auto &[j, v] : e.row.terms)
            out << "e " << j << ' ' << format_double(v) << '\n';
    }
    out << "end\n";
}

namespace {

double parse_number(const std::string &s)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

} // namespace

ConicProblem read_problem(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line != "conic 1")
        throw std::invalid_argument("read_problem: missing 'conic 1' header");
    ConicProblem p;
    SocConstraint *cone = nullptr;
    SparseRow *row = nullptr;
    EqConstraint *eq = nullptr;
    bool ended = false;
    while (std::getline(in, line))
    {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty())
            continue;
        if (key == "end")
        {
            ended = true;
            break;
        }
        if (key == "vars")
        {
            int n = 0;
            ls >> n;
            p = ConicProblem(n);
            continue;
        }
        std::string a, b;
        if (key == "obj" || key == "c" || key == "a" || key == "e")
        {
            int j = 0;
            ls >> j >> a;
            const double v = parse_number(a);
            if (key == "obj")
                p.objective[j] = v;
            else if (key == "c" && cone)
                cone->c_row.add(j, v);
            else if (key == "a" && row)
                row->add(j, v);
            else if (key == "e" && eq)
                eq->row.add(j, v);
            else
                throw std::invalid_argument("read_problem: entry outside its block: " + line);
        }
        else if (key == "bound")
        {
            int j = 0;
            ls >> j >> a >> b;
            p.set_bounds(j, parse_number(a), parse_number(b));
        }
        else if (key == "soc")
        {
            std::size_t rows = 0;
            ls >> rows >> a;
            cone = &p.add_soc();
            cone->d = parse_number(a);
            cone->a.reserve(rows);
            row = nullptr;
            eq = nullptr;
        }
        else if (key == "row")
        {
            std::size_t r = 0;
            ls >> r >> a;
            if (!cone)
                throw std::invalid_argument("read_problem: row outside a cone");
            row = &cone->add_row(parse_number(a));
        }
        else if (key == "eq")
        {
            ls >> a;
            p.eq_constraints.push_back({{}, parse_number(a)});
            eq = &p.eq_constraints.back();
            cone = nullptr;
            row = nullptr;
        }
        else
            throw std::invalid_argument("read_problem: unknown record: " + line);
    }
    if (!ended)
        throw std::invalid_argument("read_problem: missing 'end'");
    p.check();
    return p;
}

} // namespace irsra::conic
