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

#include <iosfwd>
#include <string>
#include <vector>

namespace irsra {

/// Shortest round-trip decimal form; identical bits always print identically.
std::string format_double(double v);

/// One RFC 4180 record terminated by CRLF. Fields containing a comma, quote,
/// CR or LF are quoted with embedded quotes doubled.
void write_csv_row(std::ostream &out, const std::vector<std::string> &fields);

} // namespace irsra
