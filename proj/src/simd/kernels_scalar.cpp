// SPDX-License-Identifier: Apache-2.0
#include "sien/simd/kernels.hpp"

namespace sien::simd {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double squared_distance_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

constexpr Kernels kScalar{Isa::scalar, dot_scalar, axpy_scalar, squared_distance_scalar};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace sien::simd
