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

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace poptransfer {

using Complex = std::complex<double>;

/// Dense square matrix, row-major. Sizes here are small (n <= a few hundred),
/// so no expression templates or blocking.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < n_ && c < n_);
    return data_[r * n_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < n_ && c < n_);
    return data_[r * n_ + c];
  }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }
  std::span<const T> data() const noexcept { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealMatrix = SquareMatrix<double>;
using ComplexMatrix = SquareMatrix<Complex>;

template <typename T>
SquareMatrix<T> operator*(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  SquareMatrix<T> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <typename T>
std::vector<T> operator*(const SquareMatrix<T>& a, std::span<const T> x) {
  assert(a.size() == x.size());
  std::vector<T> y(a.size(), T{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    T acc{};
    for (std::size_t j = 0; j < a.size(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

/// Largest absolute entrywise difference.
template <typename T>
double max_abs_diff(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = std::abs(a.data()[i] - b.data()[i]);
    if (d > m) m = d;
  }
  return m;
}

/// Frobenius norm.
template <typename T>
double frobenius_norm(const SquareMatrix<T>& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace poptransfer
