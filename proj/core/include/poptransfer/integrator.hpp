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

#include "poptransfer/model.hpp"

namespace poptransfer {

struct IntegratorConfig {
  /// Step size; 0 selects default_step().
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t sample_stride = 1;
  /// Repeat the run at dt/2 and store the max population deviation in
  /// Trajectory::richardson_deviation.
  bool richardson_check = false;
};

inline constexpr double kNormDriftLimit = 1e-8;
inline constexpr double kMaxSteps = 1e9;

/// 1e-3 divided by the fastest rate in the problem: coupling strength times
/// envelope, level energies, drive frequency, or inverse pulse width.
double default_step(const SystemSpec& spec, const Pulse& p);

/// Fixed-step RK4 for i da/dt = (E + V(t) W) a from a(0) = e_1.
/// Samples t = 0, every sample_stride steps, and t_end.
/// Throws Errc::NormDrift, Errc::StepCountOverflow, Errc::InvalidConfig.
Trajectory integrate(const SystemSpec& spec, const Pulse& p, const IntegratorConfig& cfg);

/// RK4 from `start` at t_from to t_to (either direction) with step |dt|.
AmplitudeVector propagate_rk4(const SystemSpec& spec, const Pulse& p, const AmplitudeVector& start,
                              double t_from, double t_to, double dt);

/// Delta-kick train: exact free phases between kicks, exact exp(-i A W)
/// jumps at each kick. Records t = 0, pre/post pairs per kick, and t_end.
Trajectory integrate_kicks(const SystemSpec& spec, const Pulse& train, double t_end);

/// Empirical RK4 order log2(e(h) / e(h/2)) against the exact propagator at
/// t_probe. NaN when the coarse error is exactly zero. Degenerate specs only.
double convergence_order(const SystemSpec& spec, const Pulse& p, double t_probe);

}  // namespace poptransfer
