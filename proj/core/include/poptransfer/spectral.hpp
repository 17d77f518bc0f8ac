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
#include <span>
#include <vector>

#include "poptransfer/linalg.hpp"
#include "poptransfer/model.hpp"

namespace poptransfer {

/// Eigenvalues ascending; column j of `vectors` is the unit eigenvector for
/// values[j], sign-fixed so its first nonzero component is positive.
struct EigenSystem {
  std::vector<double> values;
  RealMatrix vectors;

  std::size_t size() const noexcept { return values.size(); }
};

/// Cyclic Jacobi rotations. Throws Errc::NoConvergence after 100 sweeps.
EigenSystem eigen_decompose(const CouplingMatrix& w);

/// U(A) = exp(-i A W) = Q diag(exp(-i z_j A)) Q^T.
ComplexMatrix propagator(const EigenSystem& es, double area);

/// U(A) applied to a state without forming the full matrix.
AmplitudeVector propagate_state(const EigenSystem& es, double area, const AmplitudeVector& a);

/// Effective three-level description of the partially symmetric system with
/// beta = gamma = 1 and zero diagonals. Index 0/1/2 follow the eigenvector
/// families (x, y) = (1, y+), (1, y-), (-1, 0).
struct ReducedSystem {
  std::size_t n;
  double alpha;
  std::array<double, 3> x;   // {1, 1, -1}
  double y_plus;
  double y_minus;
  std::array<double, 3> z;   // {alpha + (n-2) y+, alpha + (n-2) y-, -alpha}
  std::array<std::array<double, 3>, 3> m;     // rows (1, x_j, (n-2) y_j)
  std::array<std::array<double, 3>, 3> m_inv;
};

ReducedSystem reduced_system(std::size_t n, double alpha);

/// Populations of the launch state, the target state, and any one of the
/// n-2 equivalent remaining states.
struct PopulationTriple {
  double p1;
  double p2;
  double p3_per_state;
  /// Set by design_populations when n > 3: the closed form there is only
  /// exact at theta = 0 and theta = 2 pi n0.
  bool endpoint_exact_only = false;

  double conservation(std::size_t n) const {
    return p1 + p2 + static_cast<double>(n - 2) * p3_per_state;
  }
};

/// Double-cosine sum over the reduced eigen-phases at phase area A.
PopulationTriple reduced_populations(const ReducedSystem& rs, double area);

/// Closed-form populations along a designed pulse as functions of
/// theta = 2 pi n0 A / A0.
PopulationTriple design_populations(double theta, std::size_t n);

enum class AreaBranch { Positive, Negative };

struct TransferDesign {
  std::size_t n;
  long n0;
  double alpha;
  double beta;
  double area;  // A(t0), signed by branch
  long k;       // (z1 - z2) A0 / pi
  long k_prime; // (z2 - z3) A0 / pi

  /// theta(A) = 2 pi n0 A / A0.
  double theta(double a) const;
  /// Structured coupling realizing this design.
  StructuredCoupling coupling() const { return {alpha, beta, 1.0, {}}; }
  SystemSpec system() const { return SystemSpec(n, coupling()); }
};

/// Complete 1 -> 2 transfer design for n >= 3 and odd n0.
TransferDesign design_transfer(std::size_t n, long n0, AreaBranch branch = AreaBranch::Positive);

/// Two-state rule: A0 = n0 pi / 2 with W = [[0,1],[1,0]].
TransferDesign design_transfer_2state(long n0, AreaBranch branch = AreaBranch::Positive);

/// Exact evolution of a degenerate system from e_1 via the full propagator.
/// Throws Errc::NotDegenerate when levels differ.
Trajectory evolve_analytic(const SystemSpec& spec, const Pulse& p, std::span<const double> times);

}  // namespace poptransfer
