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

#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "poptransfer/error.hpp"

namespace poptransfer::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"system", {"n", "n0", "energies", "coupling", "alpha", "beta", "gamma", "epsilon", "matrix"}},
      {"pulse", {"shape", "chi", "omega", "v0", "peak", "center", "width", "headroom", "kicks"}},
      {"run", {"t_end", "dt", "samples", "method"}},
  };
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    config_error(Errc::InvalidConfig, "not a number: '" + std::string(text) + "'");
  return v;
}

long parse_long(std::string_view text) {
  text = trim(text);
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    config_error(Errc::InvalidConfig, "not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        config_error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": bad section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(section))
        config_error(Errc::UnknownKey, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      config_error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      config_error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": key outside a section");
    cfg.set(section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(Errc::InvalidConfig, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::set(const std::string& section, const std::string& key, std::string value) {
  const auto it = schema().find(section);
  if (it == schema().end() || !it->second.contains(key))
    config_error(Errc::UnknownKey, "unknown key '" + key + "' in [" + section + "]");
  values_[section][key] = std::move(value);
}

std::optional<std::string> RunConfig::get(const std::string& section, const std::string& key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::optional<double> RunConfig::get_double(const std::string& section, const std::string& key) const {
  if (auto v = get(section, key)) return parse_double(*v);
  return std::nullopt;
}

std::optional<long> RunConfig::get_long(const std::string& section, const std::string& key) const {
  if (auto v = get(section, key)) return parse_long(*v);
  return std::nullopt;
}

}  // namespace poptransfer::cli
