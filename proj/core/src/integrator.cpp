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

#include "poptransfer/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "poptransfer/error.hpp"
#include "poptransfer/spectral.hpp"

namespace poptransfer {

namespace {

// Right-hand side -i (E a + V(t) W a), written into out.
class Rhs {
 public:
  Rhs(const SystemSpec& spec, const Pulse& p)
      : energies_(spec.energies().begin(), spec.energies().end()),
        w_(build_coupling(spec)),
        pulse_(p) {}

  void operator()(double t, std::span<const Complex> a, std::span<Complex> out) const {
    const std::size_t n = a.size();
    const double v = pulse_value(pulse_, t);
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc = energies_[k] * a[k];
      if (v != 0.0) {
        Complex coupled{};
        for (std::size_t j = 0; j < n; ++j) coupled += w_(k, j) * a[j];
        acc += v * coupled;
      }
      out[k] = Complex(acc.imag(), -acc.real());
    }
  }

 private:
  std::vector<double> energies_;
  CouplingMatrix w_;
  const Pulse& pulse_;
};

class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(const Rhs& f, double t, double h, std::span<Complex> a) {
    const std::size_t n = a.size();
    f(t, a, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = a[i] + 0.5 * h * k1_[i];
    f(t + 0.5 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = a[i] + 0.5 * h * k2_[i];
    f(t + 0.5 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = a[i] + h * k3_[i];
    f(t + h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      a[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

std::size_t step_count(double span, double dt) {
  const double raw = std::abs(span) / dt;
  if (!(raw < kMaxSteps))
    throw Error(Errc::StepCountOverflow, "more than 1e9 steps requested");
  // Tolerate rounding when dt divides span.
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) <= 1e-9 * std::max(1.0, raw))
    return std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
  return static_cast<std::size_t>(std::ceil(raw));
}

void check_norm(const AmplitudeVector& a, double t) {
  const double drift = std::abs(1.0 - a.norm_squared());
  if (!(drift <= kNormDriftLimit))
    throw Error(Errc::NormDrift, "norm drift " + std::to_string(drift) + " at t = " +
                                     std::to_string(t) + "; reduce dt");
}

Trajectory run_rk4(const SystemSpec& spec, const Pulse& p, double dt, double t_end,
                   std::size_t stride) {
  const Rhs rhs(spec, p);
  const std::size_t steps = step_count(t_end, dt);
  const double h = t_end / static_cast<double>(steps);
  AmplitudeVector a = AmplitudeVector::basis(spec.n(), 0);
  Rk4Stepper stepper(spec.n());

  Trajectory traj;
  traj.push(0.0, pulse_area(p, 0.0), a);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s - 1) * h;
    stepper.step(rhs, t, h, a.values());
    const double t_next = s == steps ? t_end : static_cast<double>(s) * h;
    check_norm(a, t_next);
    if (s % stride == 0 || s == steps) traj.push(t_next, pulse_area(p, t_next), a);
  }
  return traj;
}

}  // namespace

double default_step(const SystemSpec& spec, const Pulse& p) {
  double rate = 1.0;
  rate = std::max(rate, build_coupling(spec).norm_bound() * p.envelope_scale());
  for (double e : spec.energies()) rate = std::max(rate, std::abs(e));
  if (const auto* c = std::get_if<CosinePulse>(&p.shape())) rate = std::max(rate, c->omega);
  if (const auto* g = std::get_if<GaussianPulse>(&p.shape()))
    rate = std::max(rate, 1.0 / g->width);
  return 1e-3 / rate;
}

Trajectory integrate(const SystemSpec& spec, const Pulse& p, const IntegratorConfig& cfg) {
  if (p.is_kick_train())
    throw Error(Errc::InvalidConfig, "kick trains are handled by integrate_kicks");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
    throw Error(Errc::InvalidConfig, "t_end must be positive and finite");
  if (cfg.dt < 0.0 || !std::isfinite(cfg.dt))
    throw Error(Errc::InvalidConfig, "dt must be positive");
  if (cfg.sample_stride == 0) throw Error(Errc::InvalidConfig, "sample_stride must be >= 1");

  const double dt = cfg.dt > 0.0 ? cfg.dt : default_step(spec, p);
  Trajectory traj = run_rk4(spec, p, dt, cfg.t_end, cfg.sample_stride);
  if (cfg.richardson_check) {
    const Trajectory fine = run_rk4(spec, p, 0.5 * dt, cfg.t_end, 2 * cfg.sample_stride);
    traj.richardson_deviation = traj.max_population_diff(fine);
  }
  return traj;
}

namespace {

AmplitudeVector rk4_unchecked(const SystemSpec& spec, const Pulse& p, const AmplitudeVector& start,
                              double t_from, double t_to, double dt) {
  AmplitudeVector a = start;
  if (t_from == t_to) return a;
  const Rhs rhs(spec, p);
  const std::size_t steps = step_count(t_to - t_from, dt);
  const double h = (t_to - t_from) / static_cast<double>(steps);
  Rk4Stepper stepper(spec.n());
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t_from + static_cast<double>(s) * h;
    stepper.step(rhs, t, h, a.values());
  }
  return a;
}

}  // namespace

AmplitudeVector propagate_rk4(const SystemSpec& spec, const Pulse& p, const AmplitudeVector& start,
                              double t_from, double t_to, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidConfig, "dt must be positive");
  AmplitudeVector a = rk4_unchecked(spec, p, start, t_from, t_to, dt);
  check_norm(a, t_to);
  return a;
}

Trajectory integrate_kicks(const SystemSpec& spec, const Pulse& train, double t_end) {
  if (!train.is_kick_train())
    throw Error(Errc::InvalidConfig, "integrate_kicks needs a kick train");
  if (!(t_end >= 0.0)) throw Error(Errc::InvalidConfig, "t_end must be >= 0");
  const CouplingMatrix w = build_coupling(spec);
  const EigenSystem base = eigen_decompose(w);
  const auto energies = spec.energies();

  AmplitudeVector a = AmplitudeVector::basis(spec.n(), 0);
  double t = 0.0;
  double area = 0.0;
  auto free_evolve = [&](double until) {
    const double dt = until - t;
    if (dt > 0.0)
      for (std::size_t k = 0; k < a.size(); ++k) a[k] *= std::polar(1.0, -energies[k] * dt);
    t = until;
  };

  Trajectory traj;
  traj.push(0.0, 0.0, a);
  for (const auto& kick : train.kicks().kicks) {
    if (kick.time < 0.0 || kick.time > t_end) continue;
    free_evolve(kick.time);
    traj.push(t, area, a);
    if (kick.relabel) {
      const auto [launch, target] = *kick.relabel;
      a = propagate_state(eigen_decompose(w.relabeled(launch, target)), kick.area, a);
    } else {
      a = propagate_state(base, kick.area, a);
    }
    area += kick.area;
    traj.push(t, area, a);
  }
  free_evolve(t_end);
  traj.push(t_end, area, a);
  return traj;
}

double convergence_order(const SystemSpec& spec, const Pulse& p, double t_probe) {
  if (!spec.is_degenerate())
    throw Error(Errc::NotDegenerate, "convergence_order needs an exact reference");
  if (p.is_kick_train()) throw Error(Errc::InvalidConfig, "smooth pulse required");
  if (!(t_probe > 0.0)) throw Error(Errc::InvalidConfig, "t_probe must be positive");

  const double rate = build_coupling(spec).norm_bound() * p.envelope_scale();
  double h = t_probe / 8.0;
  if (rate > 0.0) h = std::min(h, 0.1 / rate);
  if (const auto* c = std::get_if<CosinePulse>(&p.shape())) h = std::min(h, 0.1 / c->omega);
  if (const auto* g = std::get_if<GaussianPulse>(&p.shape())) h = std::min(h, 0.1 * g->width);

  const AmplitudeVector start = AmplitudeVector::basis(spec.n(), 0);
  AmplitudeVector exact =
      propagate_state(eigen_decompose(build_coupling(spec)), pulse_area(p, t_probe), start);
  const Complex global = std::polar(1.0, -spec.energies().front() * t_probe);
  for (std::size_t k = 0; k < exact.size(); ++k) exact[k] *= global;

  auto error_at = [&](double step) {
    // Coarse steps drift in norm by design; no drift guard here.
    const AmplitudeVector a = rk4_unchecked(spec, p, start, 0.0, t_probe, step);
    double e = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - exact[k]));
    return e;
  };
  const double coarse = error_at(h);
  if (coarse == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / error_at(0.5 * h));
}

}  // namespace poptransfer
