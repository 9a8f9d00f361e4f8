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

#include <json.hpp>

#include <filesystem>

namespace irsra {

/*!
JSON form of NetworkConfig. Top-level keys:

    K, M, L, N                      integers
    p_max                           {"dbm": x} or {"watts": x}; x scalar or one per ST
    sigma2                          {"dbm": x} or {"watts": x}
    Q                               optional integer
    carrier_hz, bandwidth_hz        numbers
    geometry                        {"st_center": [x, y], "dt_center": [x, y],
                                     "cluster_radius": r, "irs_position": [x, y]}
    exponents                       {"direct": a, "st_irs": b, "irs_dt": c}
    ref_loss_db                     number
    power_model                     {"P_ST": {dbm|watts}, "P_DT": {dbm|watts},
                                     "xi_ST": x, "module_coeff_w": c}
    variance_model                  optional, "reference_loss" (default) or "ratio200"

Missing keys keep the reference scenario's value. Power objects must carry
exactly one of "dbm" / "watts". The result is validated.
*/
NetworkConfig config_from_json(const nlohmann::json &j);
NetworkConfig load_config(const std::filesystem::path &path);
nlohmann::json config_to_json(const NetworkConfig &config);

} // namespace irsra
