// Copyright 2026 The poptransfer Authors
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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poptransfer::cli {

/// Flat `key = value` configuration grouped under `[section]` headers.
/// Comments start with `#` or `;`. Unknown sections or keys are rejected.
class RunConfig {
 public:
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);

  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<long> get_long(const std::string& section, const std::string& key) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
};

/// Comma-separated reals.
std::vector<double> parse_list(std::string_view text);
double parse_double(std::string_view text);
long parse_long(std::string_view text);

}  // namespace poptransfer::cli
