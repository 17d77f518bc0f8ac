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

#include "poptransfer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "poptransfer/error.hpp"

namespace poptransfer {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_squares(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return s;
}

// Zeroes a(p, q) with a plane rotation and accumulates it into v.
void rotate(RealMatrix& a, RealMatrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(tau) > 1e150) {
    t = 0.5 / tau;
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenSystem eigen_decompose(const CouplingMatrix& w) {
  const std::size_t n = w.size();
  RealMatrix a = w.matrix();
  RealMatrix v = RealMatrix::identity(n);

  const double scale = frobenius_norm(a);
  const double threshold = scale * scale * 1e-32;
  bool converged = off_diagonal_squares(a) <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    converged = off_diagonal_squares(a) <= threshold;
  }
  if (!converged)
    throw Error(Errc::NoConvergence, "Jacobi iteration did not converge in " +
                                         std::to_string(kMaxSweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenSystem es{std::vector<double>(n), RealMatrix(n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    es.values[col] = a(src, src);
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(v(k, src)) > 1e-12) {
        sign = v(k, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    for (std::size_t k = 0; k < n; ++k) es.vectors(k, col) = sign * v(k, src);
  }
  return es;
}

ComplexMatrix propagator(const EigenSystem& es, double area) {
  const std::size_t n = es.size();
  if (area == 0.0) return ComplexMatrix::identity(n);
  std::vector<Complex> phase(n);
  for (std::size_t j = 0; j < n; ++j) phase[j] = std::polar(1.0, -es.values[j] * area);
  ComplexMatrix u(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc{};
      for (std::size_t j = 0; j < n; ++j)
        acc += es.vectors(r, j) * phase[j] * es.vectors(c, j);
      u(r, c) = acc;
    }
  return u;
}

AmplitudeVector propagate_state(const EigenSystem& es, double area, const AmplitudeVector& a) {
  if (area == 0.0) return a;
  const std::size_t n = es.size();
  std::vector<Complex> mode(n, Complex{});
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) acc += es.vectors(k, j) * a[k];
    mode[j] = acc * std::polar(1.0, -es.values[j] * area);
  }
  std::vector<Complex> out(n, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += es.vectors(k, j) * mode[j];
    out[k] = acc;
  }
  return AmplitudeVector(std::move(out));
}

ReducedSystem reduced_system(std::size_t n, double alpha) {
  if (n < 3) throw Error(Errc::NTooSmall, "reduced system needs n >= 3");
  const double m = static_cast<double>(n - 2);

  // (n-2) y^2 + (alpha - n + 3) y - 2 = 0, normalized: y^2 + s y + c = 0.
  const double s = (alpha - static_cast<double>(n) + 3.0) / m;
  const double c = -2.0 / m;
  const double disc = s * s - 4.0 * c;
  const double q = -0.5 * (s + (s >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
  const double r1 = q;
  const double r2 = c / q;
  const double y_plus = std::max(r1, r2);
  const double y_minus = std::min(r1, r2);
  if (!(y_plus > y_minus)) throw Error(Errc::DegenerateRoots, "y+ == y-");

  ReducedSystem rs{};
  rs.n = n;
  rs.alpha = alpha;
  rs.x = {1.0, 1.0, -1.0};
  rs.y_plus = y_plus;
  rs.y_minus = y_minus;
  rs.z = {alpha + m * y_plus, alpha + m * y_minus, -alpha};

  const std::array<double, 3> y{y_plus, y_minus, 0.0};
  for (std::size_t j = 0; j < 3; ++j) rs.m[j] = {1.0, rs.x[j], m * y[j]};

  const double d = y_plus - y_minus;
  const double f = 1.0 / (2.0 * d);
  rs.m_inv = {{{-y_minus * f, y_plus * f, d * f},
               {-y_minus * f, y_plus * f, -d * f},
               {2.0 / m * f, -2.0 / m * f, 0.0}}};
  return rs;
}

PopulationTriple reduced_populations(const ReducedSystem& rs, double area) {
  std::array<double, 3> p{};
  for (std::size_t k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        acc += rs.m_inv[k][i] * rs.m_inv[k][j] * std::cos((rs.z[i] - rs.z[j]) * area);
    p[k] = acc;
  }
  return {p[0], p[1], p[2]};
}

PopulationTriple design_populations(double theta, std::size_t n) {
  if (n < 3) throw Error(Errc::NTooSmall, "closed form needs n >= 3");
  const double c1 = std::cos(theta);
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  PopulationTriple out{(3.0 + c1 + 4.0 * ch) / 8.0, (3.0 + c1 - 4.0 * ch) / 8.0,
                       0.5 * sh * sh / static_cast<double>(n - 2)};
  out.endpoint_exact_only = n > 3;
  return out;
}

double TransferDesign::theta(double a) const {
  return 2.0 * std::numbers::pi * static_cast<double>(n0) * a / area;
}

TransferDesign design_transfer(std::size_t n, long n0, AreaBranch branch) {
  if (n < 3)
    throw Error(Errc::NTooSmall, "design_transfer needs n >= 3; use design_transfer_2state");
  if (n0 % 2 == 0) throw Error(Errc::EvenN0, "n0 must be odd, got " + std::to_string(n0));
  const double nn = static_cast<double>(n);
  const double sign = branch == AreaBranch::Positive ? 1.0 : -1.0;
  const long isign = branch == AreaBranch::Positive ? 1 : -1;
  const double root = std::sqrt(9.0 / (18.0 * (nn - 2.0) + 4.0 * (nn - 3.0) * (nn - 3.0)));
  TransferDesign d{};
  d.n = n;
  d.n0 = n0;
  d.alpha = -(nn - 3.0) / 3.0;
  d.beta = 1.0;
  d.area = sign * static_cast<double>(n0) * std::numbers::pi * root;
  d.k = 2 * n0 * isign;
  d.k_prime = -n0 * isign;
  return d;
}

TransferDesign design_transfer_2state(long n0, AreaBranch branch) {
  if (n0 % 2 == 0) throw Error(Errc::EvenN0, "n0 must be odd, got " + std::to_string(n0));
  const double sign = branch == AreaBranch::Positive ? 1.0 : -1.0;
  const long isign = branch == AreaBranch::Positive ? 1 : -1;
  TransferDesign d{};
  d.n = 2;
  d.n0 = n0;
  d.alpha = 1.0;
  d.beta = 1.0;
  d.area = sign * static_cast<double>(n0) * std::numbers::pi / 2.0;
  // Eigenvalues of [[0,1],[1,0]] are +-1: (z1 - z2) A0 / pi = n0.
  d.k = n0 * isign;
  d.k_prime = 0;
  return d;
}

Trajectory evolve_analytic(const SystemSpec& spec, const Pulse& p, std::span<const double> times) {
  if (!spec.is_degenerate())
    throw Error(Errc::NotDegenerate, "analytic evolution requires equal energies");
  const EigenSystem es = eigen_decompose(build_coupling(spec));
  const AmplitudeVector start = AmplitudeVector::basis(spec.n(), 0);
  Trajectory traj;
  for (double t : times) {
    const double a = pulse_area(p, t);
    traj.push(t, a, propagate_state(es, a, start));
  }
  return traj;
}

}  // namespace poptransfer
