// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace sien::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

// Dense double-precision kernels used by the learner's inner loops.
struct Kernels {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i (x[i] - y[i])^2
  double (*squared_distance)(const double* x, const double* y, std::size_t n);
};

const Kernels& scalar_kernels();

// Whether this build and this CPU can run the given variant.
bool supported(Isa isa);

// Throws std::invalid_argument when unsupported.
const Kernels& kernels_for(Isa isa);

// Best supported variant, unless SIEN_SIMD=scalar|avx2|neon overrides it.
// Resolved once on first call.
const Kernels& active();

// Overrides the active variant (tests and benchmarking). Not thread-safe
// with concurrent kernel use.
void set_active(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().squared_distance(x.data(), y.data(), x.size());
}

namespace detail {
// Defined only in builds that compile the corresponding variant.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();
}  // namespace detail

}  // namespace sien::simd
