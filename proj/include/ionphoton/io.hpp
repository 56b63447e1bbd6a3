/* Copyright 2026 The ionphoton Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the CSV/JSON writers and the CLI.
namespace ionphoton::io {

// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

// Strict, locale-independent parse of a whole string; nullopt-style failure
// is signalled by returning false.
bool parse_number(std::string_view text, double &out);

std::string csv_line(const std::vector<std::string> &fields);

std::string sha256_hex(std::string_view bytes);

}  // namespace ionphoton::io
