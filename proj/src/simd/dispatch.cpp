// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sien/simd/kernels.hpp"

namespace sien::simd {

namespace detail {
#if !defined(SIEN_HAVE_AVX2)
const Kernels* avx2_kernels() { return nullptr; }
#endif
#if !defined(SIEN_HAVE_NEON)
const Kernels* neon_kernels() { return nullptr; }
#endif
}  // namespace detail

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(SIEN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon: return detail::neon_kernels() != nullptr;
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("SIMD variant not supported here: " + std::string(to_string(isa)));
  switch (isa) {
    case Isa::avx2: return *detail::avx2_kernels();
    case Isa::neon: return *detail::neon_kernels();
    case Isa::scalar: break;
  }
  return scalar_kernels();
}

namespace {

const Kernels* pick_default() {
  if (const char* env = std::getenv("SIEN_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == to_string(isa) && supported(isa)) return &kernels_for(isa);
    }
  }
  if (supported(Isa::avx2)) return detail::avx2_kernels();
  if (supported(Isa::neon)) return detail::neon_kernels();
  return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> k{pick_default()};
  return k;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace sien::simd
