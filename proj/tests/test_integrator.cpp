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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "poptransfer/error.hpp"
#include "poptransfer/integrator.hpp"
#include "poptransfer/spectral.hpp"

namespace poptransfer {
namespace {

using std::numbers::pi;

SystemSpec two_state(std::vector<double> energies = {}) {
  RealMatrix m(2);
  m(0, 1) = m(1, 0) = 1.0;
  return SystemSpec(2, ExplicitCoupling{m}, std::move(energies));
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::InvalidSystem;
}

std::vector<double> sample_times(const Trajectory& t) {
  std::vector<double> out;
  for (const auto& s : t.samples()) out.push_back(s.t);
  return out;
}

TEST(Integrate, TwoStateConstantPulse) {
  IntegratorConfig cfg;
  cfg.t_end = pi / 2;
  const auto traj = integrate(two_state(), Pulse(ConstantPulse{1.0}), cfg);
  EXPECT_NEAR(traj.back().t, pi / 2, 1e-15);
  EXPECT_NEAR(traj.back().populations[1], 1.0, 1e-8);
}

TEST(Integrate, FourStateDesignCosine) {
  const auto d = design_transfer(4, 1);
  const Pulse p(CosinePulse{1.0, 1.0 / (1.05 * d.area)});
  IntegratorConfig cfg;
  cfg.t_end = invert_area(p, d.area);
  cfg.sample_stride = 100;
  const auto traj = integrate(d.system(), p, cfg);
  EXPECT_NEAR(traj.back().populations[1], 1.0, 1e-6);
  EXPECT_LE(traj.max_norm_drift(), 1e-8);
}

TEST(Integrate, SingleStepStaysNearInitialState) {
  const auto d = design_transfer(3, 1);
  IntegratorConfig cfg;
  cfg.t_end = 1e-6;
  const auto traj = integrate(d.system(), Pulse(ConstantPulse{1.0}), cfg);
  EXPECT_EQ(traj.size(), 2u);
  EXPECT_NEAR(traj.back().populations[0], 1.0, 1e-11);
}

TEST(Integrate, ErrorPaths) {
  const auto spec = design_transfer(3, 1).system();
  IntegratorConfig coarse;
  coarse.t_end = 10.0;
  coarse.dt = 1.0;
  EXPECT_EQ(error_of([&] { integrate(spec, Pulse(ConstantPulse{1.0}), coarse); }),
            Errc::NormDrift);
  IntegratorConfig tiny;
  tiny.t_end = 10.0;
  tiny.dt = 1e-9;
  EXPECT_EQ(error_of([&] { integrate(spec, Pulse(ConstantPulse{1.0}), tiny); }),
            Errc::StepCountOverflow);
  IntegratorConfig zero;
  EXPECT_EQ(error_of([&] { integrate(spec, Pulse(ConstantPulse{1.0}), zero); }),
            Errc::InvalidConfig);
  IntegratorConfig ok;
  ok.t_end = 1.0;
  EXPECT_EQ(error_of([&] { integrate(spec, Pulse(KickTrainPulse{{{0.5, 1.0}}}), ok); }),
            Errc::InvalidConfig);
}

TEST(Integrate, StrideAlwaysIncludesEndpoints) {
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  cfg.sample_stride = 30;
  const auto traj = integrate(two_state(), Pulse(ConstantPulse{1.0}), cfg);
  const auto t = sample_times(traj);
  ASSERT_EQ(t.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
}

TEST(Integrate, RichardsonDeviationIsSmall) {
  IntegratorConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt = 0.01;
  cfg.sample_stride = 10;
  cfg.richardson_check = true;
  const auto traj = integrate(design_transfer(4, 1).system(), Pulse(CosinePulse{1.0, 0.7}), cfg);
  EXPECT_LT(traj.richardson_deviation, 1e-8);
  EXPECT_GT(traj.richardson_deviation, 0.0);
}

// Property: RK4 and the exact propagator agree for degenerate systems.
TEST(IntegrateProperty, MatchesAnalytic) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const SystemSpec spec = n == 2 ? two_state() : design_transfer(n, 1).system();
    const auto d = n == 2 ? design_transfer_2state(1) : design_transfer(n, 1);
    const Pulse p(CosinePulse{1.0, 1.0 / (1.05 * d.area)});
    IntegratorConfig cfg;
    cfg.t_end = invert_area(p, d.area);
    cfg.sample_stride = 50;
    const auto num = integrate(spec, p, cfg);
    const auto times = sample_times(num);
    const auto exact = evolve_analytic(spec, p, times);
    EXPECT_LE(num.max_population_diff(exact), 1e-8) << "n=" << n;
    EXPECT_LE(num.max_norm_drift(), 1e-8);
  }
}

TEST(IntegrateProperty, TimeReversalReturnsToLaunchState) {
  for (std::size_t n : {2u, 4u, 6u}) {
    const SystemSpec spec = n == 2 ? two_state() : design_transfer(n, 1).system();
    const Pulse p(CosinePulse{1.3, 0.8});
    const auto e1 = AmplitudeVector::basis(n, 0);
    const double dt = default_step(spec, p);
    const auto forward = propagate_rk4(spec, p, e1, 0.0, 3.0, dt);
    const auto back = propagate_rk4(spec, p, forward, 3.0, 0.0, dt);
    EXPECT_NEAR(std::abs(back[0] - 1.0), 0.0, 1e-7);
    for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(std::abs(back[k]), 0.0, 1e-7);
  }
}

TEST(IntegrateKicks, SingleKickSwitchesPermanently) {
  const Pulse train(KickTrainPulse{{{1.0, pi / 2}}});
  const auto traj = integrate_kicks(two_state(), train, 5.0);
  ASSERT_EQ(traj.size(), 4u);  // start, pre, post, end
  EXPECT_EQ(traj.samples()[1].populations[0], 1.0);
  for (std::size_t i = 2; i < traj.size(); ++i)
    EXPECT_NEAR(traj.samples()[i].populations[1], 1.0, 1e-12);
}

TEST(IntegrateKicks, ZeroAreaKickLeavesStateUnchanged) {
  const Pulse train(KickTrainPulse{{{0.5, 0.0}, {1.5, 0.0}}});
  const auto traj = integrate_kicks(design_transfer(4, 1).system(), train, 2.0);
  for (const auto& s : traj.samples()) EXPECT_NEAR(s.populations[0], 1.0, 1e-15);
}

TEST(IntegrateKicks, RelabeledSecondKickReturnsPopulation) {
  const auto d = design_transfer(4, 1);
  const Pulse train(KickTrainPulse{{{1.0, d.area}, {2.0, d.area, std::pair<std::size_t, std::size_t>{1, 0}}}});
  const auto traj = integrate_kicks(d.system(), train, 3.0);
  EXPECT_NEAR(traj.samples()[2].populations[1], 1.0, 1e-10);
  EXPECT_NEAR(traj.back().populations[0], 1.0, 1e-10);

  // Oracle: two applications of the spectral propagator.
  const auto w = build_coupling(d.system());
  auto a = propagate_state(eigen_decompose(w), d.area, AmplitudeVector::basis(4, 0));
  a = propagate_state(eigen_decompose(w.relabeled(1, 0)), d.area, a);
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_NEAR(std::abs(a[k] - traj.final_state()[k]), 0.0, 1e-12);
}

TEST(IntegrateKicks, RelabelRoutesToAThirdState) {
  // 1 -> 2 then 2 -> 3 using the same designed couplings.
  const auto d = design_transfer(5, 1);
  const Pulse train(KickTrainPulse{
      {{1.0, d.area}, {2.0, d.area, std::pair<std::size_t, std::size_t>{1, 2}}}});
  const auto traj = integrate_kicks(d.system(), train, 3.0);
  EXPECT_NEAR(traj.back().populations[2], 1.0, 1e-10);
}

TEST(IntegrateKicks, FreePhasesBetweenKicks) {
  // With split levels the second kick sees a relative phase, but populations
  // between kicks never change.
  const Pulse train(KickTrainPulse{{{1.0, pi / 4}, {2.0, pi / 4}}});
  const auto traj = integrate_kicks(two_state({0.0, 1.0}), train, 3.0);
  const auto s = traj.samples();
  EXPECT_NEAR(s[2].populations[1], 0.5, 1e-12);
  EXPECT_NEAR(s[3].populations[1], 0.5, 1e-12);
  // Relative phase e^{-i} rotates the second half-transfer away from completion.
  EXPECT_LT(traj.back().populations[1], 1.0 - 1e-3);
}

// With exactly degenerate levels any pulse shape reproduces the kick (only
// the area matters), so a small splitting makes the width visible.
TEST(IntegrateKicksProperty, NarrowGaussianConvergesToKick) {
  const auto spec = two_state({0.0, 0.02});
  const double area = pi / 4;
  const double center = 1.0, t_end = 2.0;
  const auto kick = integrate_kicks(spec, Pulse(KickTrainPulse{{{center, area}}}), t_end);
  double previous = 1.0;
  for (double w : {0.08, 0.04, 0.02, 0.01}) {
    const Pulse g(GaussianPulse{area / (w * std::sqrt(2 * pi)), center, w});
    IntegratorConfig cfg;
    cfg.t_end = t_end;
    cfg.sample_stride = static_cast<std::size_t>(-1);
    const auto traj = integrate(spec, g, cfg);
    double err = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
      err = std::max(err, std::abs(traj.final_state()[k] - kick.final_state()[k]));
    EXPECT_LT(err, previous) << "width " << w;
    previous = err;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(ConvergenceOrder, FourthOrderOnSmoothPulses) {
  const double o3 = convergence_order(design_transfer(3, 1).system(), Pulse(CosinePulse{1.0, 1.0}), 2.0);
  EXPECT_GE(o3, 3.7);
  EXPECT_LE(o3, 4.3);
  const double o2 = convergence_order(two_state(), Pulse(ConstantPulse{1.0}), 2.0);
  EXPECT_GE(o2, 3.7);
  EXPECT_LE(o2, 4.3);
  const double og = convergence_order(design_transfer(4, 1).system(),
                                      Pulse(GaussianPulse{1.0, 1.0, 0.3}), 2.0);
  EXPECT_GE(og, 3.7);
  EXPECT_LE(og, 4.3);
}

TEST(ConvergenceOrder, ZeroCouplingIsNaN) {
  const SystemSpec spec(3, ExplicitCoupling{RealMatrix(3)});
  EXPECT_TRUE(std::isnan(convergence_order(spec, Pulse(CosinePulse{1.0, 1.0}), 1.0)));
}

}  // namespace
}  // namespace poptransfer
