// Copyright 2026 The Glotkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace glotkit {

/// Shortest round-trippable decimal form ("%.17g" trimmed), so rewriting a
/// file with the same values is byte-identical.
std::string format_double(double v);

double parse_double(const std::string& s);

/// Splits one CSV line; no quoting support, fields must not contain commas.
std::vector<std::string> split_csv_line(const std::string& line);

/// FNV-1a over the file bytes, for provenance sidecars.
std::uint64_t hash_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace glotkit
