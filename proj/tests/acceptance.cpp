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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "poptransfer/analysis.hpp"
#include "poptransfer/error.hpp"
#include "poptransfer/integrator.hpp"
#include "poptransfer/spectral.hpp"

namespace {

using namespace poptransfer;
using std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_s;
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Figure-style drive: chi = 1, chi/omega = 1.05 A0.
Pulse default_pulse(const TransferDesign& d) { return Pulse(CosinePulse{1.0, 1.0 / (1.05 * std::abs(d.area))}); }

double p2_at_design(std::size_t n, long n0) {
  const auto d = design_transfer(n, n0);
  const auto a = propagate_state(eigen_decompose(build_coupling(d.system())), d.area,
                                 AmplitudeVector::basis(n, 0));
  return std::norm(a[1]);
}

Outcome ac1() {
  const auto d = design_transfer(3, 1);
  const Pulse p = default_pulse(d);
  const double t0 = invert_area(p, d.area);
  const double t[] = {t0};
  const double analytic = evolve_analytic(d.system(), p, t).back().populations[1];
  IntegratorConfig cfg;
  cfg.t_end = t0;
  cfg.sample_stride = static_cast<std::size_t>(-1);
  const double rk4 = integrate(d.system(), p, cfg).back().populations[1];
  const double ea = std::abs(analytic - 1.0), er = std::abs(rk4 - 1.0);
  return {std::abs(d.area - pi / std::sqrt(2.0)) < 1e-12 && d.alpha == 0.0 && ea <= 1e-10 && er <= 1e-6,
          "A0/pi=" + fmt(d.area / pi) + " |P2-1| analytic=" + fmt(ea) + " rk4=" + fmt(er)};
}

Outcome ac2() {
  double transfer = 0.0, phase = 0.0, alpha = 0.0;
  for (std::size_t n = 4; n <= 10; ++n)
    for (long n0 : {1L, 3L}) {
      const auto d = design_transfer(n, n0);
      const auto rs = reduced_system(n, d.alpha);
      alpha = std::max(alpha, std::abs(d.alpha + (static_cast<double>(n) - 3.0) / 3.0));
      phase = std::max({phase, std::abs((rs.z[0] - rs.z[1]) * d.area / pi - 2.0 * n0),
                        std::abs((rs.z[1] - rs.z[2]) * d.area / pi + n0)});
      transfer = std::max(transfer, std::abs(p2_at_design(n, n0) - 1.0));
    }
  return {transfer <= 1e-10 && phase <= 1e-10 && alpha == 0.0,
          "max |P2-1|=" + fmt(transfer) + " max phase error=" + fmt(phase)};
}

Outcome ac3() {
  constexpr std::size_t n = 4;
  const auto d = design_transfer(n, 1);
  const Pulse p = default_pulse(d);
  IntegratorConfig cfg;
  cfg.t_end = invert_area(p, d.area);
  cfg.dt = cfg.t_end / 20000.0;
  cfg.sample_stride = 100;
  const auto rk4 = integrate(d.system(), p, cfg);
  std::vector<double> t;
  for (const auto& s : rk4.samples()) t.push_back(s.t);
  const auto analytic = evolve_analytic(d.system(), p, t);
  double conservation = 0.0;
  for (const auto& s : analytic.samples()) {
    const double p3 = s.populations[2];
    conservation = std::max(conservation, std::abs(s.populations[0] + s.populations[1] + (n - 2) * p3 - 1.0));
  }
  const double diff = rk4.max_population_diff(analytic);
  const double theta_end = d.theta(analytic.back().area);
  return {diff <= 1e-6 && conservation <= 1e-12 && std::abs(theta_end - 2 * pi) < 1e-8,
          "samples=" + std::to_string(t.size()) + " max|analytic-rk4|=" + fmt(diff) +
              " conservation=" + fmt(conservation)};
}

Outcome ac4() {
  double n3 = 0.0;
  {
    const auto d = design_transfer(3, 1);
    const auto rs = reduced_system(3, d.alpha);
    for (int i = 0; i <= 20000; ++i) {
      const double th = 2 * pi * i / 20000.0;
      const auto a = design_populations(th, 3);
      const auto b = reduced_populations(rs, th / (2 * pi) * d.area);
      n3 = std::max({n3, std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2), std::abs(a.p3_per_state - b.p3_per_state)});
    }
  }
  const auto d = design_transfer(4, 1);
  const auto rs = reduced_system(4, d.alpha);
  double ends = 0.0, mid = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double th = 2 * pi * i / 2000.0;
    const auto a = design_populations(th, 4);
    const auto b = reduced_populations(rs, th / (2 * pi) * d.area);
    const double dev = std::max({std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2), std::abs(a.p3_per_state - b.p3_per_state)});
    if (i == 0 || i == 2000) ends = std::max(ends, dev);
    mid = std::max(mid, dev);
  }
  return {n3 <= 1e-12 && ends <= 1e-10,
          "n=3 max dev=" + fmt(n3) + " n=4 endpoint dev=" + fmt(ends) + " n=4 mid-pulse max dev=" + fmt(mid)};
}

Outcome ac5() {
  const auto d2 = design_transfer_2state(1);
  const auto es = eigen_decompose(build_coupling(d2.system()));
  double two = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double a = -5.0 + 10.0 * i / 1000.0;
    const auto pop = propagate_state(es, a, AmplitudeVector::basis(2, 0)).populations();
    two = std::max({two, std::abs(pop[0] - std::pow(std::cos(a), 2)), std::abs(pop[1] - std::pow(std::sin(a), 2))});
  }
  double large = 0.0;
  for (std::size_t n : {10u, 100u}) large = std::max(large, std::abs(p2_at_design(n, 1) - 1.0));
  return {two <= 1e-10 && large <= 1e-10, "2-state dev=" + fmt(two) + " n=10,100 |P2-1|=" + fmt(large)};
}

Outcome ac6() {
  std::vector<double> ratios;
  for (int i = 0; i < 8; ++i) ratios.push_back(0.01 * std::pow(10.0, i / 7.0));
  const auto f = fit_power_law(leakage_scan(4, 1, 1.0, ratios));
  return {f.exponent >= 1.8 && f.exponent <= 2.2 && std::abs(f.coefficient) < 1.0 && f.r_squared >= 0.98,
          "exponent=" + fmt(f.exponent) + " c=" + fmt(f.coefficient) + " r2=" + fmt(f.r_squared)};
}

Outcome ac7() {
  RealMatrix w(2);
  w(0, 1) = w(1, 0) = 1.0;
  const SystemSpec degenerate(2, ExplicitCoupling{w});
  const Pulse kick(KickTrainPulse{{{1.0, pi / 2}}});
  double after = 0.0;
  for (double t_end : {1.0, 1.5, 2.0, 5.0, 20.0}) {
    const auto traj = integrate_kicks(degenerate, kick, t_end);
    const auto& ss = traj.samples();  // start, pre, post, ...
    for (std::size_t i = 2; i < ss.size(); ++i) after = std::max(after, std::abs(ss[i].populations[1] - 1.0));
  }
  // A small level splitting makes the finite width visible.
  const SystemSpec split(2, ExplicitCoupling{w}, {0.0, 0.02});
  const double area = pi / 4;
  const auto ref = integrate_kicks(split, Pulse(KickTrainPulse{{{1.0, area}}}), 2.0);
  std::vector<double> errs;
  for (double width : {0.08, 0.04, 0.02, 0.01}) {
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    cfg.sample_stride = static_cast<std::size_t>(-1);
    const auto g = integrate(split, Pulse(GaussianPulse{area / (width * std::sqrt(2 * pi)), 1.0, width}), cfg);
    errs.push_back(std::max(std::abs(g.final_state()[0] - ref.final_state()[0]),
                            std::abs(g.final_state()[1] - ref.final_state()[1])));
  }
  const bool monotone = std::is_sorted(errs.rbegin(), errs.rend()) &&
                        std::adjacent_find(errs.begin(), errs.end()) == errs.end();
  std::string e;
  for (double x : errs) e += (e.empty() ? "" : ",") + fmt(x);
  return {after <= 1e-12 && monotone, "post-kick |P2-1|=" + fmt(after) + " gaussian errors=" + e};
}

Outcome ac8() {
  double lo = 1e9, hi = -1e9;
  for (std::size_t n : {3u, 4u, 6u}) {
    const double o = convergence_order(design_transfer(n, 1).system(), Pulse(CosinePulse{1.0, 1.0}), 2.0);
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  {
    const double o = convergence_order(design_transfer(4, 1).system(), Pulse(GaussianPulse{2.0, 1.0, 0.4}), 2.0);
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> al(-3, 3), ar(-5, 5);
  double group = 0.0;
  for (int t = 0; t < 40; ++t) {
    const auto es = eigen_decompose(build_coupling(SystemSpec(3 + t % 8, StructuredCoupling{al(rng)})));
    const double a1 = ar(rng), a2 = ar(rng);
    const auto u1 = propagator(es, a1);
    group = std::max({group, max_abs_diff(adjoint(u1) * u1, ComplexMatrix::identity(es.size())),
                      max_abs_diff(u1 * propagator(es, a2), propagator(es, a1 + a2))});
  }
  double drift = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto d = n == 2 ? design_transfer_2state(1) : design_transfer(n, 1);
    for (const Pulse& p : {default_pulse(d), Pulse(GaussianPulse{1.0, 2.0, 0.5}), Pulse(ConstantPulse{0.8})}) {
      IntegratorConfig cfg;
      cfg.t_end = 4.0;
      drift = std::max(drift, integrate(d.system(), p, cfg).max_norm_drift());
      drift = std::max(drift, integrate(d.system().with_energies(std::vector<double>(n, 0.0)), p, cfg).max_norm_drift());
    }
  }
  return {lo >= 3.7 && hi <= 4.3 && group <= 1e-10 && drift <= 1e-8,
          "order in [" + fmt(lo) + ", " + fmt(hi) + "] unitarity/group=" + fmt(group) + " norm drift=" + fmt(drift)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "complete transfer, n=3", 1.0, ac1},
      {"AC2", "complete transfer, n=4..10, n0 in {1,3}", 5.0, ac2},
      {"AC3", "4-state figure, analytic vs rk4", 5.0, ac3},
      {"AC4", "closed-form population audit", 1.0, ac4},
      {"AC5", "2-state and large-n limits", 5.0, ac5},
      {"AC6", "leakage scaling", 30.0, ac6},
      {"AC7", "kick semantics", 10.0, ac7},
      {"AC8", "numerics hygiene", 10.0, ac8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const Error& e) {
      o = {false, "error=" + std::string(e.name()) + " " + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %s  %s: %s [%.3f s, limit %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs, c.limit_s, in_time ? "" : ", exceeded");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
