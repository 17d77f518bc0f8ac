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

#include "poptransfer/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "poptransfer/error.hpp"
#include "poptransfer/integrator.hpp"
#include "poptransfer/spectral.hpp"

namespace poptransfer {

double transfer_fidelity(const Trajectory& traj, std::size_t target, double t0) {
  if (traj.empty()) throw Error(Errc::OutOfRange, "empty trajectory");
  const auto s = traj.samples();
  if (target >= s.front().populations.size())
    throw Error(Errc::OutOfRange, "target state index out of range");
  if (t0 < s.front().t || t0 > s.back().t)
    throw Error(Errc::OutOfRange, "t0 outside the trajectory span");

  // Last sample with t <= t0, so a post-kick value wins at the kick instant.
  auto it = std::upper_bound(s.begin(), s.end(), t0,
                             [](double t, const Sample& x) { return t < x.t; });
  const std::size_t hi = static_cast<std::size_t>(it - s.begin());
  const std::size_t lo = hi - 1;
  if (hi == s.size() || s[lo].t == t0) return s[lo].populations[target];
  const double w = (t0 - s[lo].t) / (s[hi].t - s[lo].t);
  return (1.0 - w) * s[lo].populations[target] + w * s[hi].populations[target];
}

std::vector<Extremum> find_extrema(const Trajectory& traj, std::size_t k) {
  std::vector<Extremum> out;
  const auto s = traj.samples();
  if (s.size() < 3) return out;

  int last_sign = 0;
  std::size_t turn = 0;  // sample where the last nonzero slope ended
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double d = s[i + 1].populations[k] - s[i].populations[k];
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      const std::size_t c = turn;
      Extremum e{s[c].t, s[c].populations[k], last_sign > 0};
      if (c > 0 && c + 1 < s.size()) {
        // Parabola through (t_{c-1}, t_c, t_{c+1}).
        const double t0 = s[c - 1].t, t1 = s[c].t, t2 = s[c + 1].t;
        const double y0 = s[c - 1].populations[k], y1 = s[c].populations[k],
                     y2 = s[c + 1].populations[k];
        const double d01 = (y1 - y0) / (t1 - t0);
        const double d12 = (y2 - y1) / (t2 - t1);
        const double a = (d12 - d01) / (t2 - t0);
        if (a != 0.0 && t1 > t0 && t2 > t1) {
          const double b = d01 - a * (t0 + t1);
          const double tv = -b / (2.0 * a);
          if (tv >= t0 && tv <= t2) {
            e.t = tv;
            e.value = y1 + (tv - t1) * (d01 + a * (tv - t0));
          }
        }
      }
      out.push_back(e);
    }
    last_sign = sign;
    turn = i + 1;
  }
  return out;
}

namespace {

LeakagePoint leakage_point(const TransferDesign& design, double omega, double ratio,
                           const LeakageScanOptions& opts) {
  std::vector<double> energies(design.n);
  for (std::size_t k = 0; k < design.n; ++k)
    energies[k] = static_cast<double>(k) * ratio * omega;
  const SystemSpec spec = design.system().with_energies(std::move(energies));
  const Pulse pulse(CosinePulse{opts.headroom * std::abs(design.area) * omega, omega});
  const double t0 = invert_area(pulse, design.area);

  IntegratorConfig cfg;
  cfg.dt = opts.dt;
  cfg.t_end = t0;
  cfg.sample_stride = static_cast<std::size_t>(-1);
  const Trajectory traj = integrate(spec, pulse, cfg);
  const double p2 = traj.back().populations[1];
  return {ratio, std::clamp(1.0 - p2, 0.0, 1.0)};
}

}  // namespace

std::vector<LeakagePoint> leakage_scan(std::size_t n, long n0, double pulse_omega,
                                       std::span<const double> ratios,
                                       const LeakageScanOptions& opts) {
  if (!(pulse_omega > 0.0)) throw Error(Errc::InvalidPulse, "pulse omega must be positive");
  for (double r : ratios)
    if (!(r >= 0.0 && r < 1.0))
      throw Error(Errc::RatioOutOfRange,
                  "detuning ratio must lie in [0, 1), got " + std::to_string(r));
  const TransferDesign design = n == 2 ? design_transfer_2state(n0) : design_transfer(n, n0);

  std::vector<LeakagePoint> out(ratios.size());
  if (opts.parallel && ratios.size() > 1) {
    std::vector<std::future<LeakagePoint>> jobs;
    jobs.reserve(ratios.size());
    for (double r : ratios)
      jobs.push_back(std::async(std::launch::async, leakage_point, std::cref(design),
                                pulse_omega, r, std::cref(opts)));
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < ratios.size(); ++i)
      out[i] = leakage_point(design, pulse_omega, ratios[i], opts);
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const LeakagePoint> points) {
  if (points.size() < 3)
    throw Error(Errc::InsufficientPoints, "power-law fit needs at least 3 points, got " +
                                              std::to_string(points.size()));
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!(p.detuning_ratio > 0.0) || !(p.leakage > 0.0))
      throw Error(Errc::NonPositiveValue, "power-law fit needs positive ratio and leakage");
    x.push_back(std::log(p.detuning_ratio));
    y.push_back(std::log(p.leakage));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(Errc::InsufficientPoints, "all ratios identical");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
  }
  const double r2 = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return {slope, std::exp(intercept), r2};
}

}  // namespace poptransfer
