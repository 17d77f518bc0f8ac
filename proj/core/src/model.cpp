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

#include "poptransfer/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "poptransfer/error.hpp"

namespace poptransfer {

namespace {

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

bool finite(double x) { return std::isfinite(x); }

// erf(x) - erf(y) without cancellation in the tails.
double erf_difference(double x, double y) {
  if (x >= 0.0 && y >= 0.0) return std::erfc(y) - std::erfc(x);
  if (x <= 0.0 && y <= 0.0) return std::erfc(-x) - std::erfc(-y);
  return std::erf(x) - std::erf(y);
}

}  // namespace

// ---------------------------------------------------------------------------
// CouplingMatrix / SystemSpec
// ---------------------------------------------------------------------------

CouplingMatrix::CouplingMatrix(RealMatrix m) : w_(std::move(m)) {
  for (std::size_t i = 0; i < w_.size(); ++i)
    for (std::size_t j = i + 1; j < w_.size(); ++j)
      if (w_(i, j) != w_(j, i))
        fail(Errc::AsymmetricMatrix, "coupling matrix is not symmetric at (" +
                                         std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ")");
  for (double v : w_.data())
    if (!finite(v)) fail(Errc::InvalidSystem, "coupling matrix has non-finite entries");
}

double CouplingMatrix::norm_bound() const {
  double best = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    double s = 0.0;
    for (double v : w_.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

CouplingMatrix CouplingMatrix::relabeled(std::size_t launch, std::size_t target) const {
  const std::size_t n = w_.size();
  if (launch >= n || target >= n || launch == target)
    fail(Errc::InvalidSystem, "relabel indices out of range or equal");
  // perm[design index] = physical index
  std::vector<std::size_t> perm{launch, target};
  for (std::size_t k = 0; k < n; ++k)
    if (k != launch && k != target) perm.push_back(k);
  RealMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(perm[i], perm[j]) = w_(i, j);
  return CouplingMatrix(std::move(out));
}

SystemSpec::SystemSpec(std::size_t n, CouplingSpec coupling, std::vector<double> energies)
    : n_(n), coupling_(std::move(coupling)), energies_(std::move(energies)) {
  if (n_ < 2) fail(Errc::InvalidSystem, "need at least 2 states");
  if (energies_.empty()) energies_.assign(n_, 0.0);
  if (energies_.size() != n_)
    fail(Errc::InvalidSystem, "expected " + std::to_string(n_) + " energies, got " +
                                  std::to_string(energies_.size()));
  if (!std::all_of(energies_.begin(), energies_.end(), finite))
    fail(Errc::InvalidSystem, "energies must be finite");
  if (const auto* ex = std::get_if<ExplicitCoupling>(&coupling_);
      ex && ex->matrix.size() != n_)
    fail(Errc::InvalidSystem, "explicit coupling matrix size does not match n");
}

bool SystemSpec::is_degenerate() const noexcept {
  return std::all_of(energies_.begin(), energies_.end(),
                     [&](double e) { return e == energies_.front(); });
}

CouplingMatrix build_coupling(const SystemSpec& spec) {
  const std::size_t n = spec.n();
  if (const auto* ex = std::get_if<ExplicitCoupling>(&spec.coupling()))
    return CouplingMatrix(ex->matrix);

  const auto& s = std::get<StructuredCoupling>(spec.coupling());
  RealMatrix w(n);
  if (n == 2) {
    // Only alpha and the two diagonals are meaningful for two states.
    if (s.beta != 1.0 || s.gamma != 1.0 || s.epsilon[2] != 0.0)
      fail(Errc::StructuredRequiresN3,
           "structured coupling with beta/gamma/epsilon3 requires n >= 3");
    w(0, 0) = s.epsilon[0];
    w(1, 1) = s.epsilon[1];
    w(0, 1) = w(1, 0) = s.alpha;
    return CouplingMatrix(std::move(w));
  }

  w(0, 0) = s.epsilon[0];
  w(1, 1) = s.epsilon[1];
  w(0, 1) = w(1, 0) = s.alpha;
  for (std::size_t j = 2; j < n; ++j) {
    w(j, j) = s.epsilon[2];
    w(0, j) = w(j, 0) = s.beta;
    w(1, j) = w(j, 1) = s.gamma;
    for (std::size_t k = j + 1; k < n; ++k) w(j, k) = w(k, j) = s.gamma;
  }
  return CouplingMatrix(std::move(w));
}

// ---------------------------------------------------------------------------
// Pulse
// ---------------------------------------------------------------------------

Pulse::Pulse(CosinePulse p) : shape_(p) {
  if (!finite(p.chi) || !finite(p.omega) || !(p.omega > 0.0))
    fail(Errc::InvalidPulse, "cosine pulse needs finite chi and omega > 0");
}

Pulse::Pulse(ConstantPulse p) : shape_(p) {
  if (!finite(p.v0)) fail(Errc::InvalidPulse, "constant pulse needs finite v0");
}

Pulse::Pulse(KickTrainPulse p) : shape_(std::move(p)) {
  const auto& ks = std::get<KickTrainPulse>(shape_).kicks;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!finite(ks[i].time) || !finite(ks[i].area))
      fail(Errc::InvalidPulse, "kick times and areas must be finite");
    if (i > 0 && !(ks[i].time > ks[i - 1].time))
      fail(Errc::NonIncreasingKicks, "kick times must be strictly increasing");
  }
}

Pulse::Pulse(GaussianPulse p) : shape_(p) {
  if (!finite(p.peak) || !finite(p.center) || !finite(p.width) || !(p.width > 0.0))
    fail(Errc::InvalidPulse, "gaussian pulse needs finite parameters and width > 0");
}

double Pulse::envelope_scale() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CosinePulse>) return std::abs(s.chi);
        else if constexpr (std::is_same_v<T, ConstantPulse>) return std::abs(s.v0);
        else if constexpr (std::is_same_v<T, GaussianPulse>) return std::abs(s.peak);
        else return 0.0;
      },
      shape_);
}

double pulse_value(const Pulse& p, double t) {
  return std::visit(
      [t](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
          return s.chi * std::cos(s.omega * t);
        } else if constexpr (std::is_same_v<T, ConstantPulse>) {
          return s.v0;
        } else if constexpr (std::is_same_v<T, GaussianPulse>) {
          const double u = (t - s.center) / s.width;
          return s.peak * std::exp(-0.5 * u * u);
        } else {
          return 0.0;
        }
      },
      p.shape());
}

double pulse_area(const Pulse& p, double t) {
  return std::visit(
      [t](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
          return s.chi / s.omega * std::sin(s.omega * t);
        } else if constexpr (std::is_same_v<T, ConstantPulse>) {
          return s.v0 * t;
        } else if constexpr (std::is_same_v<T, GaussianPulse>) {
          const double scale = std::numbers::sqrt2 * s.width;
          const double prefactor =
              s.peak * s.width * std::sqrt(std::numbers::pi / 2.0);
          return prefactor * erf_difference((t - s.center) / scale, -s.center / scale);
        } else {
          double a = 0.0;
          for (const auto& k : s.kicks) {
            if (k.time > t) break;
            a += k.area;
          }
          return a;
        }
      },
      p.shape());
}

namespace {

double bisect_area(const Pulse& p, double target, double lo, double hi) {
  // A(lo) - target and A(hi) - target have opposite signs (or one is zero).
  const double flo = pulse_area(p, lo) - target;
  if (flo == 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = pulse_area(p, mid) - target;
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) lo = mid;
    else hi = mid;
  }
  const double elo = std::abs(pulse_area(p, lo) - target);
  const double ehi = std::abs(pulse_area(p, hi) - target);
  return elo <= ehi ? lo : hi;
}

}  // namespace

double invert_area(const Pulse& p, double target) {
  if (!finite(target)) fail(Errc::Unreachable, "target area must be finite");
  if (target == 0.0) return 0.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(target));

  const double t0 = std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CosinePulse>) {
          const double amax = std::abs(s.chi) / s.omega;
          if (std::abs(target) > amax * (1.0 + 1e-15))
            fail(Errc::Unreachable, "cosine pulse area never exceeds chi/omega");
          const double ratio = std::clamp(target / (s.chi / s.omega), -1.0, 1.0);
          const double phase = ratio >= 0.0 ? std::asin(ratio)
                                            : std::numbers::pi - std::asin(ratio);
          return phase / s.omega;
        } else if constexpr (std::is_same_v<T, ConstantPulse>) {
          if (s.v0 == 0.0 || (target > 0.0) != (s.v0 > 0.0))
            fail(Errc::Unreachable, "constant pulse never reaches target area");
          return target / s.v0;
        } else if constexpr (std::is_same_v<T, GaussianPulse>) {
          const double total = pulse_area(Pulse(s), s.center + 40.0 * s.width);
          if (s.peak == 0.0 || (target > 0.0) != (s.peak > 0.0) ||
              std::abs(target) > std::abs(total) + tol)
            fail(Errc::Unreachable, "gaussian pulse never reaches target area");
          // Area is monotone in t; bracket by doubling.
          const Pulse pulse(s);
          double hi = std::max(s.width, s.center);
          while (std::abs(pulse_area(pulse, hi)) < std::abs(target) &&
                 hi < s.center + 40.0 * s.width)
            hi = std::min(2.0 * hi + s.width, s.center + 40.0 * s.width);
          return bisect_area(pulse, target, 0.0, hi);
        } else {
          double a = 0.0;
          for (const auto& k : s.kicks) {
            a += k.area;
            if (std::abs(a - target) <= tol) return k.time;
          }
          fail(Errc::Unreachable, "no kick prefix sums to the target area");
        }
      },
      p.shape());

  if (std::abs(pulse_area(p, t0) - target) > tol)
    fail(Errc::Unreachable, "area inversion did not meet tolerance");
  return t0;
}

// ---------------------------------------------------------------------------
// AmplitudeVector / Trajectory
// ---------------------------------------------------------------------------

AmplitudeVector AmplitudeVector::basis(std::size_t n, std::size_t k) {
  std::vector<Complex> a(n, Complex{});
  a.at(k) = 1.0;
  return AmplitudeVector(std::move(a));
}

double AmplitudeVector::norm_squared() const {
  double s = 0.0;
  for (const auto& c : a_) s += std::norm(c);
  return s;
}

std::vector<double> AmplitudeVector::populations() const {
  std::vector<double> p(a_.size());
  std::transform(a_.begin(), a_.end(), p.begin(), [](Complex c) { return std::norm(c); });
  return p;
}

void Trajectory::push(double t, double area, const AmplitudeVector& a) {
  if (!samples_.empty() && t < samples_.back().t)
    fail(Errc::InvalidSystem, "trajectory times must be non-decreasing");
  auto pops = a.populations();
  for (double v : pops)
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9))
      fail(Errc::NormDrift, "population left [0, 1]");
  samples_.push_back({t, area, std::move(pops), a.norm_squared()});
  final_ = a;
}

double Trajectory::max_norm_drift() const {
  double m = 0.0;
  for (const auto& s : samples_) m = std::max(m, std::abs(1.0 - s.norm));
  return m;
}

double Trajectory::max_population_diff(const Trajectory& other) const {
  if (other.size() != size())
    fail(Errc::OutOfRange, "trajectories have different sample counts");
  double m = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& a = samples_[i].populations;
    const auto& b = other.samples_[i].populations;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  }
  return m;
}

}  // namespace poptransfer
