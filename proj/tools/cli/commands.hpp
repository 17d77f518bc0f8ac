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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "cli/config.hpp"
#include "poptransfer/error.hpp"
#include "poptransfer/model.hpp"
#include "poptransfer/spectral.hpp"

namespace poptransfer::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

int exit_code_for(Errc code);

struct GlobalOptions {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  bool porcelain = false;
  std::uint64_t seed = 20260101;
};

struct DesignArgs {
  long n = 0;
  long n0 = 1;
  std::optional<std::string> pulse;  // e.g. "cosine:chi=1,omega=0.6"
  bool negative = false;
};

/// Inline overrides shared by simulate and kick; each lands in the config.
struct ScenarioArgs {
  std::optional<long> n;
  std::optional<long> n0;
  std::optional<std::string> method;
  std::optional<long> samples;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> chi;
  std::optional<double> omega;
  std::optional<std::string> shape;
  std::optional<std::string> kicks;
};

struct LeakageArgs {
  long n = 4;
  long n0 = 1;
  double omega = 1.0;
  std::string ratios = "geom:0.01:0.1:8";
  double dt = 0.0;
};

struct SelftestArgs {
  std::optional<std::string> filter;
  std::optional<double> dt;
};

/// Fully resolved problem: system, reference design (for theta and t0),
/// pulse, and run parameters.
struct Scenario {
  SystemSpec spec;
  TransferDesign reference;
  Pulse pulse;
  double t_end;
  double dt;  // 0 = default
  long samples;
  std::string method;
};

Scenario resolve_scenario(const RunConfig& cfg);

/// Parses "shape:key=value,..." pulse descriptions.
Pulse parse_pulse(const std::string& text);

/// Parses "time:area[:launch>target]" entries (1-based states); `area` may
/// be the word `design`, meaning the reference design area.
KickTrainPulse parse_kicks(const std::string& text, double design_area, std::size_t n);

/// "geom:lo:hi:count" or a comma list.
std::vector<double> parse_ratios(const std::string& text);

int cmd_design(const GlobalOptions& g, const DesignArgs& a, std::ostream& out, std::ostream& err);
int cmd_simulate(const GlobalOptions& g, const ScenarioArgs& a, std::ostream& out, std::ostream& err);
int cmd_kick(const GlobalOptions& g, const ScenarioArgs& a, std::ostream& out, std::ostream& err);
int cmd_leakage(const GlobalOptions& g, const LeakageArgs& a, std::ostream& out, std::ostream& err);
int cmd_selftest(const GlobalOptions& g, const SelftestArgs& a, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Errors become a single `error=<Name>` line on
/// `err` and the matching exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poptransfer::cli
