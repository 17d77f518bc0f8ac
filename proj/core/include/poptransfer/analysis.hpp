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

#include <cstddef>
#include <span>
#include <vector>

#include "poptransfer/model.hpp"

namespace poptransfer {

/// P_target at t0, linearly interpolated. `target` is zero-based.
/// Throws Errc::OutOfRange when t0 lies outside the sampled span.
double transfer_fidelity(const Trajectory& traj, std::size_t target, double t0);

struct Extremum {
  double t;
  double value;
  bool is_maximum;
};

/// Local extrema of P_k located by sign changes of the discrete slope and
/// refined with a parabola through the three surrounding samples.
std::vector<Extremum> find_extrema(const Trajectory& traj, std::size_t k);

struct LeakagePoint {
  double detuning_ratio;  // omega_ij / omega
  double leakage;         // 1 - P2(t0)
};

struct LeakageScanOptions {
  /// Drive amplitude relative to the design area: chi / omega = headroom * A0.
  double headroom = 1.05;
  /// Integrator step; 0 selects the default.
  double dt = 0.0;
  /// Evaluate points on worker threads. Results are identical either way.
  bool parallel = true;
};

/// Leakage of the degenerate design when the levels are split into a
/// uniform ladder E_k = (k - 1) r omega, driven by chi cos(omega t) up to
/// the degenerate-design t0.
std::vector<LeakagePoint> leakage_scan(std::size_t n, long n0, double pulse_omega,
                                       std::span<const double> ratios,
                                       const LeakageScanOptions& opts = {});

struct PowerLawFit {
  double exponent;
  double coefficient;
  double r_squared;
};

/// Least-squares line through (log r, log leakage).
PowerLawFit fit_power_law(std::span<const LeakagePoint> points);

}  // namespace poptransfer
