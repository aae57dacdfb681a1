#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace abeltheta::kernels {

// The hot loop of the theta evaluator: along one lattice line the exponent
// is quadratic in the step index, so a whole line of terms is
//
//   out[k] = exp(a + b k + c k^2),   k = 0 .. n-1.
//
// Implementations fill the buffer only; the (deterministic, norm-ordered)
// reduction happens in the caller.  All variants must agree to ~1e-12
// relative per term, which the test suite enforces.
using LineKernel = void (*)(std::complex<double> a, std::complex<double> b,
                            std::complex<double> c, std::complex<double>* out,
                            std::size_t n);

enum class Impl {
    auto_select,  // best available, resolved once at first use
    scalar,       // reference: one std::exp per term
    unrolled,     // 4-lane product recurrence, portable
    avx2,         // 4-lane product recurrence, AVX2+FMA intrinsics
};

// Named implementation, or nullptr if not compiled / not supported here.
LineKernel get(Impl impl);

// Runtime-selected kernel.  Honors ABELTHETA_KERNEL=scalar|unrolled|avx2.
LineKernel active();
const char* active_name();

bool cpu_has_avx2();

// Reference path in extended precision (no SIMD variant).
void eval_line_ext(std::complex<long double> a, std::complex<long double> b,
                   std::complex<long double> c, std::complex<long double>* out,
                   std::size_t n);

} // namespace abeltheta::kernels
