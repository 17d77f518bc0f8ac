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

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "poptransfer/linalg.hpp"

namespace poptransfer {

// ---------------------------------------------------------------------------
// Coupling structure
// ---------------------------------------------------------------------------

/// Partially symmetric coupling: states 3..n are mutually equivalent.
/// All couplings are relative to the common envelope, V_kj(t) = W_kj V(t).
struct StructuredCoupling {
  double alpha = 0.0;  // W_12
  double beta = 1.0;   // W_1j, j >= 3
  double gamma = 1.0;  // W_2j and W_jk, j,k >= 3
  std::array<double, 3> epsilon{};  // diagonals: state 1, state 2, states >= 3
};

struct ExplicitCoupling {
  RealMatrix matrix;
};

using CouplingSpec = std::variant<StructuredCoupling, ExplicitCoupling>;

/// Real symmetric matrix W of relative coupling strengths.
class CouplingMatrix {
 public:
  /// Throws Errc::AsymmetricMatrix unless m is exactly symmetric.
  explicit CouplingMatrix(RealMatrix m);

  std::size_t size() const noexcept { return w_.size(); }
  double operator()(std::size_t r, std::size_t c) const { return w_(r, c); }
  const RealMatrix& matrix() const noexcept { return w_; }

  /// Max absolute row sum; an upper bound on the spectral radius.
  double norm_bound() const;

  /// Relabel states so that design state 1 becomes `launch` and design
  /// state 2 becomes `target` (zero-based indices).
  CouplingMatrix relabeled(std::size_t launch, std::size_t target) const;

 private:
  RealMatrix w_;
};

class SystemSpec {
 public:
  /// Empty `energies` means all levels at zero.
  SystemSpec(std::size_t n, CouplingSpec coupling, std::vector<double> energies = {});

  std::size_t n() const noexcept { return n_; }
  std::span<const double> energies() const noexcept { return energies_; }
  const CouplingSpec& coupling() const noexcept { return coupling_; }
  bool is_degenerate() const noexcept;

  SystemSpec with_energies(std::vector<double> energies) const {
    return SystemSpec(n_, coupling_, std::move(energies));
  }

 private:
  std::size_t n_;
  CouplingSpec coupling_;
  std::vector<double> energies_;
};

CouplingMatrix build_coupling(const SystemSpec& spec);

// ---------------------------------------------------------------------------
// Pulses
// ---------------------------------------------------------------------------

struct CosinePulse {
  double chi;
  double omega;
};

struct ConstantPulse {
  double v0;
};

struct Kick {
  double time;
  double area;
  /// Optional relabel applied to the coupling matrix for this kick only:
  /// zero-based (launch, target).
  std::optional<std::pair<std::size_t, std::size_t>> relabel{};
};

struct KickTrainPulse {
  std::vector<Kick> kicks;
};

struct GaussianPulse {
  double peak;
  double center;
  double width;
};

/// Common time envelope V(t). Immutable; validated on construction.
class Pulse {
 public:
  using Shape = std::variant<CosinePulse, ConstantPulse, KickTrainPulse, GaussianPulse>;

  Pulse(CosinePulse p);
  Pulse(ConstantPulse p);
  Pulse(KickTrainPulse p);
  Pulse(GaussianPulse p);

  const Shape& shape() const noexcept { return shape_; }
  bool is_kick_train() const noexcept {
    return std::holds_alternative<KickTrainPulse>(shape_);
  }
  const KickTrainPulse& kicks() const { return std::get<KickTrainPulse>(shape_); }

  /// Rough bound on |V(t)|, used for step-size selection.
  double envelope_scale() const;

 private:
  Shape shape_;
};

/// V(t). Kick trains are 0 pointwise; their effect is applied as jumps.
double pulse_value(const Pulse& p, double t);

/// A(t) = integral of V over [0, t], in closed form. Kick trains are
/// right-continuous step functions.
double pulse_area(const Pulse& p, double t);

/// Smallest t0 >= 0 with A(t0) = target. Throws Errc::Unreachable when the
/// pulse never accumulates that area.
double invert_area(const Pulse& p, double target);

// ---------------------------------------------------------------------------
// State containers
// ---------------------------------------------------------------------------

class AmplitudeVector {
 public:
  AmplitudeVector() = default;
  explicit AmplitudeVector(std::vector<Complex> a) : a_(std::move(a)) {}

  /// Unit vector e_k (zero-based).
  static AmplitudeVector basis(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return a_.size(); }
  Complex operator[](std::size_t k) const { return a_[k]; }
  Complex& operator[](std::size_t k) { return a_[k]; }
  std::span<const Complex> values() const noexcept { return a_; }
  std::span<Complex> values() noexcept { return a_; }

  double norm_squared() const;
  std::vector<double> populations() const;

 private:
  std::vector<Complex> a_;
};

struct Sample {
  double t;
  double area;
  std::vector<double> populations;
  double norm;
};

/// Time-ordered population samples.
class Trajectory {
 public:
  /// Appends a sample. Times must be non-decreasing; equal times are allowed
  /// only for the pre/post pair around a kick.
  void push(double t, double area, const AmplitudeVector& a);

  std::span<const Sample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  const AmplitudeVector& final_state() const noexcept { return final_; }

  /// Largest |1 - sum_k |a_k|^2| over the samples.
  double max_norm_drift() const;

  /// Max |P_k(ours) - P_k(other)| over matching samples; sizes must agree.
  double max_population_diff(const Trajectory& other) const;

  /// Deviation measured by an optional dt/2 rerun; NaN when not computed.
  double richardson_deviation = std::numeric_limits<double>::quiet_NaN();

 private:
  std::vector<Sample> samples_;
  AmplitudeVector final_;
};

}  // namespace poptransfer
