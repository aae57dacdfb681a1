// AVX2 + FMA variant of the exp-quadratic line kernel.  Compiled with
// -mavx2 -mfma on x86-64; callers must gate on cpu_has_avx2().

#include "abeltheta/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace abeltheta::kernels {

namespace {

// Lane-wise product of interleaved complex pairs (re0,im0,re1,im1).
inline __m256d cmul(__m256d x, __m256d y) {
    __m256d yr = _mm256_movedup_pd(y);         // (c0,c0,c1,c1)
    __m256d yi = _mm256_permute_pd(y, 0xF);    // (d0,d0,d1,d1)
    __m256d xs = _mm256_permute_pd(x, 0x5);    // (b0,a0,b1,a1)
    return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

} // namespace

void line_avx2(std::complex<double> a, std::complex<double> b,
               std::complex<double> c, std::complex<double>* out, std::size_t n) {
    if (n < 8) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k);
            out[k] = std::exp(a + b * t + c * (t * t));
        }
        return;
    }

    // T holds exp at lane indices k..k+3, U the per-lane stride-4 ratio;
    // each step is two complex multiplies per lane (see kernels.cpp).
    alignas(32) std::complex<double> T[4], U[4];
    for (int l = 0; l < 4; ++l) {
        const double k = static_cast<double>(l);
        T[l] = std::exp(a + b * k + c * (k * k));
        U[l] = std::exp(4.0 * b + c * (8.0 * k + 16.0));
    }
    const std::complex<double> Ws = std::exp(32.0 * c);
    const __m256d W = _mm256_setr_pd(Ws.real(), Ws.imag(), Ws.real(), Ws.imag());

    __m256d t01 = _mm256_load_pd(reinterpret_cast<const double*>(&T[0]));
    __m256d t23 = _mm256_load_pd(reinterpret_cast<const double*>(&T[2]));
    __m256d u01 = _mm256_load_pd(reinterpret_cast<const double*>(&U[0]));
    __m256d u23 = _mm256_load_pd(reinterpret_cast<const double*>(&U[2]));

    std::size_t k = 0;
    double* o = reinterpret_cast<double*>(out);
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(o + 2 * k, t01);
        _mm256_storeu_pd(o + 2 * k + 4, t23);
        t01 = cmul(t01, u01);
        t23 = cmul(t23, u23);
        u01 = cmul(u01, W);
        u23 = cmul(u23, W);
    }
    for (; k < n; ++k) {
        const double t = static_cast<double>(k);
        out[k] = std::exp(a + b * t + c * (t * t));
    }
}

} // namespace abeltheta::kernels

#endif // x86
