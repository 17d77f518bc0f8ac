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

#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli/output.hpp"
#include "poptransfer/analysis.hpp"
#include "poptransfer/integrator.hpp"

namespace poptransfer::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::InvalidConfig, msg); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

TransferDesign reference_design(long n, long n0) {
  if (n < 2) throw Error(Errc::NTooSmall, "need at least 2 states");
  return n == 2 ? design_transfer_2state(n0) : design_transfer(static_cast<std::size_t>(n), n0);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) config_error("cannot write " + path);
  f << content;
}

// CSV goes to --out when given, else to stdout; summaries then use the
// other channel so stdout stays machine-readable.
void emit(const GlobalOptions& g, const std::string& content, std::ostream& out) {
  if (g.out) write_text(*g.out, content);
  else out << content;
}

std::ostream& summary_stream(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return g.out ? out : err;
}

RunConfig base_config(const GlobalOptions& g) {
  return g.config ? RunConfig::load(*g.config) : RunConfig{};
}

void apply(const ScenarioArgs& a, RunConfig& cfg) {
  if (a.n) cfg.set("system", "n", std::to_string(*a.n));
  if (a.n0) cfg.set("system", "n0", std::to_string(*a.n0));
  if (a.method) cfg.set("run", "method", *a.method);
  if (a.samples) cfg.set("run", "samples", std::to_string(*a.samples));
  if (a.t_end) cfg.set("run", "t_end", format_number(*a.t_end));
  if (a.dt) cfg.set("run", "dt", format_number(*a.dt));
  if (a.chi) cfg.set("pulse", "chi", format_number(*a.chi));
  if (a.omega) cfg.set("pulse", "omega", format_number(*a.omega));
  if (a.shape) cfg.set("pulse", "shape", *a.shape);
  if (a.kicks) cfg.set("pulse", "kicks", *a.kicks);
}

struct PopulationColumns {
  double p1, p2, p3_per_state, p3_total, norm;
};

PopulationColumns columns(const Sample& s) {
  PopulationColumns c{s.populations[0], s.populations[1], 0.0, 0.0, s.norm};
  if (s.populations.size() > 2) c.p3_per_state = s.populations[2];
  for (std::size_t k = 2; k < s.populations.size(); ++k) c.p3_total += s.populations[k];
  return c;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::NormDrift:
    case Errc::StepCountOverflow:
    case Errc::NoConvergence:
    case Errc::DegenerateRoots:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

Pulse parse_pulse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string shape = strip(text.substr(0, colon));
  std::map<std::string, double> kv;
  if (colon != std::string::npos)
    for (const auto& item : split(text.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) config_error("pulse parameter needs key=value: '" + item + "'");
      kv[strip(item.substr(0, eq))] = parse_double(item.substr(eq + 1));
    }
  auto need = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) config_error(std::string("pulse '") + shape + "' needs " + key);
    return it->second;
  };
  if (shape == "cosine") return Pulse(CosinePulse{need("chi"), need("omega")});
  if (shape == "constant") return Pulse(ConstantPulse{need("v0")});
  if (shape == "gaussian") return Pulse(GaussianPulse{need("peak"), need("center"), need("width")});
  config_error("unknown pulse shape '" + shape + "'");
}

KickTrainPulse parse_kicks(const std::string& text, double design_area, std::size_t n) {
  KickTrainPulse train;
  if (strip(text).empty()) return train;
  for (const auto& entry : split(text, ',')) {
    const auto parts = split(strip(entry), ':');
    if (parts.size() < 2 || parts.size() > 3)
      config_error("kick entry must be time:area[:launch>target], got '" + entry + "'");
    Kick k{parse_double(parts[0]),
           strip(parts[1]) == "design" ? design_area : parse_double(parts[1])};
    if (parts.size() == 3) {
      const auto gt = parts[2].find('>');
      if (gt == std::string::npos) config_error("relabel must be launch>target");
      const long launch = parse_long(parts[2].substr(0, gt));
      const long target = parse_long(parts[2].substr(gt + 1));
      if (launch < 1 || target < 1 || static_cast<std::size_t>(launch) > n ||
          static_cast<std::size_t>(target) > n || launch == target)
        config_error("relabel states must be distinct and within 1.." + std::to_string(n));
      k.relabel = std::pair<std::size_t, std::size_t>(launch - 1, target - 1);
    }
    train.kicks.push_back(k);
  }
  return train;
}

std::vector<double> parse_ratios(const std::string& text) {
  if (text.rfind("geom:", 0) == 0) {
    const auto parts = split(text.substr(5), ':');
    if (parts.size() != 3) config_error("geometric ratios need geom:lo:hi:count");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const long count = parse_long(parts[2]);
    if (!(lo > 0.0) || !(hi > 0.0) || count < 1) config_error("geometric range needs lo, hi > 0");
    std::vector<double> out;
    for (long i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo
                               : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return out;
  }
  return parse_list(text);
}

Scenario resolve_scenario(const RunConfig& cfg) {
  const long n = cfg.get_long("system", "n").value_or(4);
  const long n0 = cfg.get_long("system", "n0").value_or(1);
  const TransferDesign reference = reference_design(n, n0);
  const auto un = static_cast<std::size_t>(n);

  const std::string coupling = cfg.get("system", "coupling").value_or("design");
  CouplingSpec cs = reference.coupling();
  if (coupling == "structured") {
    StructuredCoupling s;
    s.alpha = cfg.get_double("system", "alpha").value_or(0.0);
    s.beta = cfg.get_double("system", "beta").value_or(1.0);
    s.gamma = cfg.get_double("system", "gamma").value_or(1.0);
    if (auto eps = cfg.get("system", "epsilon")) {
      const auto v = parse_list(*eps);
      if (v.size() != 3) config_error("epsilon needs three values");
      s.epsilon = {v[0], v[1], v[2]};
    }
    cs = s;
  } else if (coupling == "explicit") {
    const auto text = cfg.get("system", "matrix");
    if (!text) config_error("explicit coupling needs matrix = row;row;...");
    const auto rows = split(*text, ';');
    if (rows.size() != un) config_error("matrix needs " + std::to_string(n) + " rows");
    RealMatrix m(un);
    for (std::size_t r = 0; r < un; ++r) {
      const auto v = parse_list(rows[r]);
      if (v.size() != un) config_error("matrix row " + std::to_string(r + 1) + " has wrong length");
      for (std::size_t c = 0; c < un; ++c) m(r, c) = v[c];
    }
    cs = ExplicitCoupling{m};
  } else if (coupling != "design") {
    config_error("coupling must be design, structured or explicit");
  }

  std::vector<double> energies;
  if (auto e = cfg.get("system", "energies")) energies = parse_list(*e);
  SystemSpec spec(un, cs, std::move(energies));
  (void)build_coupling(spec);  // surface coupling errors early

  const double a0 = reference.area;
  const std::string shape =
      cfg.get("pulse", "shape").value_or(cfg.get("pulse", "kicks") ? "kicks" : "cosine");
  std::optional<Pulse> pulse;
  if (shape == "cosine") {
    const double chi = cfg.get_double("pulse", "chi").value_or(1.0);
    const double headroom = cfg.get_double("pulse", "headroom").value_or(1.05);
    const double omega =
        cfg.get_double("pulse", "omega").value_or(std::abs(chi) / (headroom * std::abs(a0)));
    pulse.emplace(CosinePulse{chi, omega});
  } else if (shape == "constant") {
    pulse.emplace(ConstantPulse{cfg.get_double("pulse", "v0").value_or(1.0)});
  } else if (shape == "gaussian") {
    const double width = cfg.get_double("pulse", "width").value_or(0.05);
    const double center = cfg.get_double("pulse", "center").value_or(1.0);
    const double peak = cfg.get_double("pulse", "peak")
                            .value_or(a0 / (width * std::sqrt(2.0 * std::numbers::pi)));
    pulse.emplace(GaussianPulse{peak, center, width});
  } else if (shape == "kicks") {
    pulse.emplace(parse_kicks(cfg.get("pulse", "kicks").value_or(""), a0, un));
  } else {
    config_error("unknown pulse shape '" + shape + "'");
  }

  double t_end;
  if (auto t = cfg.get_double("run", "t_end")) {
    t_end = *t;
  } else if (pulse->is_kick_train()) {
    const auto& ks = pulse->kicks().kicks;
    t_end = ks.empty() ? 1.0 : ks.back().time + 1.0;
  } else {
    t_end = invert_area(*pulse, a0);
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) config_error("t_end must be >= 0");

  const double dt = cfg.get_double("run", "dt").value_or(0.0);
  if (dt < 0.0) config_error("dt must be positive");
  const long samples = cfg.get_long("run", "samples").value_or(201);
  if (samples < 1 || (t_end > 0.0 && samples < 2)) config_error("samples must be >= 2");
  const std::string method =
      cfg.get("run", "method").value_or(spec.is_degenerate() ? "both" : "rk4");
  if (method != "analytic" && method != "rk4" && method != "both")
    config_error("method must be analytic, rk4 or both");

  return Scenario{std::move(spec), reference, std::move(*pulse), t_end, dt, samples, method};
}

// ---------------------------------------------------------------------------

int cmd_design(const GlobalOptions& g, const DesignArgs& a, std::ostream& out, std::ostream&) {
  if (a.n < 2) throw Error(Errc::NTooSmall, "need at least 2 states");
  const AreaBranch branch = a.negative ? AreaBranch::Negative : AreaBranch::Positive;
  const TransferDesign d = a.n == 2 ? design_transfer_2state(a.n0, branch)
                                    : design_transfer(static_cast<std::size_t>(a.n), a.n0, branch);
  std::optional<double> t0;
  if (a.pulse) t0 = invert_area(parse_pulse(*a.pulse), d.area);

  const std::vector<std::pair<std::string, std::string>> rows{
      {"n", std::to_string(d.n)},
      {"n0", std::to_string(d.n0)},
      {"alpha", format_number(d.alpha)},
      {"beta", format_number(d.beta)},
      {"A0", format_number(d.area)},
      {"A0_over_pi", format_number(d.area / std::numbers::pi)},
      {"k", std::to_string(d.k)},
      {"k_prime", std::to_string(d.k_prime)},
  };
  if (g.porcelain) {
    for (const auto& [k, v] : rows) out << k << '=' << v << '\n';
    if (t0) out << "t0=" << format_number(*t0) << '\n';
  } else {
    out << "Complete 1 -> 2 transfer for n = " << d.n << " (n0 = " << d.n0 << ")\n";
    out << "  alpha = V12/V23 = " << format_number(d.alpha) << '\n';
    out << "  beta  = V13/V23 = " << format_number(d.beta) << '\n';
    out << "  A0    = " << format_number(d.area) << "  (A0/pi = "
        << format_number(d.area / std::numbers::pi) << ")\n";
    out << "  phase integers k = " << d.k << ", k' = " << d.k_prime << '\n';
    if (t0) out << "  t0    = " << format_number(*t0) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, const ScenarioArgs& a, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg = base_config(g);
  apply(a, cfg);
  const Scenario sc = resolve_scenario(cfg);
  if (sc.pulse.is_kick_train()) config_error("kick schedules run with the kick command");

  const bool want_analytic = sc.method != "rk4";
  const bool want_rk4 = sc.method != "analytic";
  const std::size_t n = sc.spec.n();

  std::vector<double> times;
  std::optional<Trajectory> numeric;
  if (sc.t_end == 0.0) {
    times = {0.0};
    if (want_rk4) {
      numeric.emplace();
      numeric->push(0.0, pulse_area(sc.pulse, 0.0), AmplitudeVector::basis(n, 0));
    }
  } else if (want_rk4) {
    const auto intervals = static_cast<double>(sc.samples - 1);
    const double per_sample = sc.t_end / intervals;
    const double base = sc.dt > 0.0 ? sc.dt : default_step(sc.spec, sc.pulse);
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::ceil(per_sample / base - 1e-9)));
    IntegratorConfig ic;
    ic.dt = per_sample / static_cast<double>(stride);
    ic.t_end = sc.t_end;
    ic.sample_stride = stride;
    numeric = integrate(sc.spec, sc.pulse, ic);
    for (const auto& s : numeric->samples()) times.push_back(s.t);
  } else {
    for (long m = 0; m < sc.samples; ++m)
      times.push_back(m + 1 == sc.samples ? sc.t_end
                                          : sc.t_end * static_cast<double>(m) /
                                                static_cast<double>(sc.samples - 1));
  }
  std::optional<Trajectory> analytic;
  if (want_analytic) analytic = evolve_analytic(sc.spec, sc.pulse, times);

  const Trajectory& primary = analytic ? *analytic : *numeric;
  std::vector<std::string> header{"t", "A", "theta", "P1", "P2", "P3_per_state", "P3_total", "norm"};
  const bool both = analytic && numeric;
  if (both)
    for (const char* h : {"P1_rk4", "P2_rk4", "P3_per_state_rk4", "P3_total_rk4", "norm_rk4"})
      header.emplace_back(h);
  CsvWriter csv(header);

  double max_conservation = 0.0;
  std::vector<double> p1, p2, p3;
  for (std::size_t i = 0; i < primary.size(); ++i) {
    const Sample& s = primary.samples()[i];
    const auto c = columns(s);
    std::vector<double> row{s.t, s.area, sc.reference.theta(s.area), c.p1, c.p2,
                            c.p3_per_state, c.p3_total, c.norm};
    if (both) {
      const auto r = columns(numeric->samples()[i]);
      row.insert(row.end(), {r.p1, r.p2, r.p3_per_state, r.p3_total, r.norm});
    }
    csv.add_row(row);
    max_conservation = std::max(max_conservation, std::abs(c.p1 + c.p2 + c.p3_total - 1.0));
    p1.push_back(c.p1);
    p2.push_back(c.p2);
    p3.push_back(c.p3_total);
  }
  emit(g, csv.str(), out);

  if (g.svg) {
    const std::vector<Series> series{{"P1", LineStyle::LongDash, p1},
                                     {"P2", LineStyle::Solid, p2},
                                     {"(n-2) P3", LineStyle::ShortDash, p3}};
    write_text(*g.svg, render_svg("Occupation probabilities, n = " + std::to_string(n), "t",
                                  times, series));
  }

  std::ostream& sum = summary_stream(g, out, err);
  sum << "method=" << sc.method << '\n';
  sum << "samples=" << primary.size() << '\n';
  sum << "t_end=" << format_number(sc.t_end) << '\n';
  sum << "theta_end=" << format_number(sc.reference.theta(primary.back().area)) << '\n';
  sum << "max_conservation_error=" << format_number(max_conservation) << '\n';
  if (numeric) sum << "max_norm_drift_rk4=" << format_number(numeric->max_norm_drift()) << '\n';
  if (both) sum << "max_abs_diff=" << format_number(analytic->max_population_diff(*numeric)) << '\n';
  return kExitOk;
}

int cmd_kick(const GlobalOptions& g, const ScenarioArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = base_config(g);
  apply(a, cfg);
  if (!cfg.get("pulse", "shape")) cfg.set("pulse", "shape", "kicks");
  const Scenario sc = resolve_scenario(cfg);
  if (!sc.pulse.is_kick_train()) config_error("kick command needs a kick schedule");

  const Trajectory traj = integrate_kicks(sc.spec, sc.pulse, sc.t_end);
  CsvWriter csv({"t", "event", "A", "P1", "P2", "P3_per_state", "P3_total", "norm"});
  const auto samples = traj.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const char* event = i == 0 ? "start" : i + 1 == samples.size() ? "end" : (i % 2 ? "pre" : "post");
    const auto c = columns(samples[i]);
    csv.add_row({format_number(samples[i].t), event, format_number(samples[i].area),
                 format_number(c.p1), format_number(c.p2), format_number(c.p3_per_state),
                 format_number(c.p3_total), format_number(c.norm)});
  }
  emit(g, csv.str(), out);
  std::ostream& sum = summary_stream(g, out, err);
  sum << "kicks=" << (samples.size() - 2) / 2 << '\n';
  const auto& last = samples.back().populations;
  for (std::size_t k = 0; k < last.size(); ++k)
    sum << "P" << k + 1 << "_final=" << format_number(last[k]) << '\n';
  return kExitOk;
}

int cmd_leakage(const GlobalOptions& g, const LeakageArgs& a, std::ostream& out, std::ostream&) {
  const auto ratios = parse_ratios(a.ratios);
  for (double r : ratios)
    if (!(r < 1.0) || r < 0.0)
      throw Error(Errc::RatioOutOfRange, "ratios must satisfy 0 < r < 1, got " + format_number(r));
  if (ratios.size() < 3)
    throw Error(Errc::InsufficientPoints, "the power-law fit needs at least 3 ratios");
  for (double r : ratios)
    if (!(r > 0.0)) throw Error(Errc::NonPositiveValue, "ratios must be positive for the fit");
  if (a.n < 2) throw Error(Errc::NTooSmall, "need at least 2 states");

  LeakageScanOptions opts;
  opts.dt = a.dt;
  const auto points = leakage_scan(static_cast<std::size_t>(a.n), a.n0, a.omega, ratios, opts);
  CsvWriter csv({"ratio", "leakage"});
  for (const auto& p : points) {
    const double row[] = {p.detuning_ratio, p.leakage};
    csv.add_row(row);
  }
  emit(g, csv.str(), out);
  const auto fit = fit_power_law(points);
  out << "exponent=" << format_number(fit.exponent) << ", c=" << format_number(fit.coefficient)
      << ", r2=" << format_number(fit.r_squared) << '\n';
  return kExitOk;
}

}  // namespace poptransfer::cli
