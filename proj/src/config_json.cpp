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
#include "irsra/config_json.hpp"

#include <fstream>

namespace irsra {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string &what) { throw ConfigError(ConfigError::Kind::schema, what); }

// Returns the power in watts; value may be scalar or array.
std::vector<double> read_power(const json &j, const std::string &key)
{
    if (!j.is_object())
        schema_error(key + " must be an object with a \"dbm\" or \"watts\" key");
    const bool has_dbm = j.contains("dbm");
    const bool has_watts = j.contains("watts");
    if (has_dbm == has_watts)
        schema_error(key + " needs exactly one of \"dbm\" or \"watts\"");
    const json &v = has_dbm ? j.at("dbm") : j.at("watts");
    std::vector<double> raw;
    if (v.is_array())
        for (const auto &e : v)
            raw.push_back(e.get<double>());
    else if (v.is_number())
        raw.push_back(v.get<double>());
    else
        schema_error(key + " value must be a number or an array of numbers");
    if (has_dbm)
        for (double &x : raw)
            x = dbm_to_watts(x);
    return raw;
}

double read_scalar_power(const json &j, const std::string &key)
{
    auto v = read_power(j, key);
    if (v.size() != 1)
        schema_error(key + " must be a scalar power");
    return v.front();
}

Point read_point(const json &j, const std::string &key)
{
    if (!j.is_array() || j.size() != 2)
        schema_error(key + " must be a two-element array [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

NetworkConfig config_from_json(const json &j)
{
    if (!j.is_object())
        schema_error("config must be a JSON object");
    NetworkConfig c = reference_config();
    try
    {
        if (j.contains("K"))
            c.K = j.at("K").get<int>();
        if (j.contains("M"))
            c.M = j.at("M").get<int>();
        if (j.contains("L"))
            c.L = j.at("L").get<int>();
        c.N = j.contains("N") ? j.at("N").get<int>() : c.M * c.L;
        if (j.contains("p_max"))
        {
            auto p = read_power(j.at("p_max"), "p_max");
            c.p_max_w = p.size() == 1 ? std::vector<double>(static_cast<std::size_t>(std::max(c.K, 0)), p.front()) : p;
        }
        else
            c.p_max_w.assign(static_cast<std::size_t>(std::max(c.K, 0)), c.p_max_w.front());
        if (j.contains("sigma2"))
            c.sigma2_w = read_scalar_power(j.at("sigma2"), "sigma2");
        if (j.contains("Q") && !j.at("Q").is_null())
            c.Q = j.at("Q").get<int>();
        if (j.contains("carrier_hz"))
            c.carrier_hz = j.at("carrier_hz").get<double>();
        if (j.contains("bandwidth_hz"))
            c.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        if (j.contains("geometry"))
        {
            const json &g = j.at("geometry");
            if (g.contains("st_center"))
                c.geometry.st_center = read_point(g.at("st_center"), "geometry.st_center");
            if (g.contains("dt_center"))
                c.geometry.dt_center = read_point(g.at("dt_center"), "geometry.dt_center");
            if (g.contains("cluster_radius"))
                c.geometry.cluster_radius = g.at("cluster_radius").get<double>();
            if (g.contains("irs_position"))
                c.geometry.irs_position = read_point(g.at("irs_position"), "geometry.irs_position");
        }
        if (j.contains("exponents"))
        {
            const json &e = j.at("exponents");
            c.exponents.direct = e.value("direct", c.exponents.direct);
            c.exponents.st_irs = e.value("st_irs", c.exponents.st_irs);
            c.exponents.irs_dt = e.value("irs_dt", c.exponents.irs_dt);
        }
        if (j.contains("ref_loss_db"))
            c.ref_loss_db = j.at("ref_loss_db").get<double>();
        if (j.contains("power_model"))
        {
            const json &pm = j.at("power_model");
            if (pm.contains("P_ST"))
                c.power_model.p_st_w = read_scalar_power(pm.at("P_ST"), "power_model.P_ST");
            if (pm.contains("P_DT"))
                c.power_model.p_dt_w = read_scalar_power(pm.at("P_DT"), "power_model.P_DT");
            c.power_model.xi_st = pm.value("xi_ST", c.power_model.xi_st);
            c.power_model.module_coeff_w = pm.value("module_coeff_w", c.power_model.module_coeff_w);
        }
        if (j.contains("variance_model"))
        {
            const auto vm = j.at("variance_model").get<std::string>();
            if (vm == "reference_loss")
                c.variance_model = VarianceModel::reference_loss;
            else if (vm == "ratio200")
                c.variance_model = VarianceModel::ratio200;
            else
                schema_error("unknown variance_model \"" + vm + "\"");
        }
    }
    catch (const json::exception &e)
    {
        schema_error(std::string("malformed config: ") + e.what());
    }
    return validate(std::move(c));
}

NetworkConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        schema_error("cannot open config file " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception &e)
    {
        schema_error("cannot parse " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const NetworkConfig &c)
{
    json j;
    j["K"] = c.K;
    j["M"] = c.M;
    j["L"] = c.L;
    j["N"] = c.N;
    j["p_max"] = {{"watts", c.p_max_w}};
    j["sigma2"] = {{"watts", c.sigma2_w}};
    if (c.Q)
        j["Q"] = *c.Q;
    j["carrier_hz"] = c.carrier_hz;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["geometry"] = {{"st_center", {c.geometry.st_center.x, c.geometry.st_center.y}},
                     {"dt_center", {c.geometry.dt_center.x, c.geometry.dt_center.y}},
                     {"cluster_radius", c.geometry.cluster_radius},
                     {"irs_position", {c.geometry.irs_position.x, c.geometry.irs_position.y}}};
    j["exponents"] = {{"direct", c.exponents.direct}, {"st_irs", c.exponents.st_irs}, {"irs_dt", c.exponents.irs_dt}};
    j["ref_loss_db"] = c.ref_loss_db;
    j["power_model"] = {{"P_ST", {{"watts", c.power_model.p_st_w}}},
                        {"P_DT", {{"watts", c.power_model.p_dt_w}}},
                        {"xi_ST", c.power_model.xi_st},
                        {"module_coeff_w", c.power_model.module_coeff_w}};
    j["variance_model"] = c.variance_model == VarianceModel::ratio200 ? "ratio200" : "reference_loss";
    return j;
}

} // namespace irsra
