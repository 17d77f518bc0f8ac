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

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace poptransfer::cli {

namespace {

void add_scenario_flags(CLI::App* sub, ScenarioArgs& a) {
  sub->add_option("--n", a.n, "number of states");
  sub->add_option("--n0", a.n0, "odd design index");
  sub->add_option("--samples", a.samples, "output rows");
  sub->add_option("--t-end", a.t_end, "final time");
  sub->add_option("--dt", a.dt, "integrator step");
  sub->add_option("--chi", a.chi, "cosine pulse amplitude");
  sub->add_option("--omega", a.omega, "cosine pulse frequency");
  sub->add_option("--shape", a.shape, "cosine | constant | gaussian");
}

void report(std::ostream& err, std::string_view name, const std::string& message) {
  err << "error=" << name << '\n';
  if (!message.empty()) err << message << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Population transfer in degenerate n-state systems", "poptransfer"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "run configuration file");
  app.add_option("--out", g.out, "output CSV path");
  app.add_option("--svg", g.svg, "output SVG path");
  app.add_flag("--porcelain", g.porcelain, "key=value output");
  app.add_option("--seed", g.seed, "seed for randomized properties");

  DesignArgs design;
  auto* c_design = app.add_subcommand("design", "compute transfer parameters");
  c_design->add_option("--n", design.n, "number of states")->required();
  c_design->add_option("--n0", design.n0, "odd design index");
  c_design->add_option("--pulse", design.pulse, "pulse for t0, e.g. cosine:chi=1,omega=0.6");
  c_design->add_flag("--negative", design.negative, "use the negative area branch");

  ScenarioArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "evolve populations");
  add_scenario_flags(c_sim, sim);
  c_sim->add_option("--method", sim.method, "analytic | rk4 | both");

  ScenarioArgs kick;
  auto* c_kick = app.add_subcommand("kick", "evolve under a delta-kick schedule");
  add_scenario_flags(c_kick, kick);
  c_kick->add_option("--kicks", kick.kicks, "t:area[:L>T];...");

  LeakageArgs leak;
  auto* c_leak = app.add_subcommand("leakage", "leakage versus level spacing");
  c_leak->add_option("--n", leak.n, "number of states");
  c_leak->add_option("--n0", leak.n0, "odd design index");
  c_leak->add_option("--omega", leak.omega, "pulse frequency");
  c_leak->add_option("--ratios", leak.ratios, "geom:lo:hi:count or a comma list");
  c_leak->add_option("--dt", leak.dt, "integrator step");

  SelftestArgs self;
  auto* c_self = app.add_subcommand("selftest", "run the invariant suite");
  c_self->add_option("--filter", self.filter, "model | spectral | integrator | analysis | cli");
  c_self->add_option("--dt", self.dt, "override the integrator step");

  for (auto* sub : {c_design, c_sim, c_kick, c_leak, c_self}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "Usage", e.what());
    return kExitUsage;
  }

  try {
    if (c_design->parsed()) return cmd_design(g, design, out, err);
    if (c_sim->parsed()) return cmd_simulate(g, sim, out, err);
    if (c_kick->parsed()) return cmd_kick(g, kick, out, err);
    if (c_leak->parsed()) return cmd_leakage(g, leak, out, err);
    return cmd_selftest(g, self, out, err);
  } catch (const Error& e) {
    report(err, e.name(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report(err, "Internal", e.what());
    return kExitNumerical;
  }
}

}  // namespace poptransfer::cli
