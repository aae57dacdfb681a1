#include "abeltheta/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace abeltheta::kernels {

namespace {

void line_scalar(std::complex<double> a, std::complex<double> b,
                 std::complex<double> c, std::complex<double>* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k);
        out[k] = std::exp(a + b * t + c * (t * t));
    }
}

// Same 4-lane scheme as the AVX2 kernel, written portably.  Stepping the
// lane index by 4 turns the quadratic exponent into a first-order product
// recurrence:
//   T_{k+4} = T_k * U_k,   U_{k+4} = U_k * W,   W = exp(32 c).
void line_unrolled(std::complex<double> a, std::complex<double> b,
                   std::complex<double> c, std::complex<double>* out, std::size_t n) {
    using C = std::complex<double>;
    if (n < 8) {
        line_scalar(a, b, c, out, n);
        return;
    }
    C T[4], U[4];
    for (int l = 0; l < 4; ++l) {
        const double k = static_cast<double>(l);
        T[l] = std::exp(a + b * k + c * (k * k));
        // exp at k+4 over exp at k: exp(4b + c(8k + 16))
        U[l] = std::exp(4.0 * b + c * (8.0 * k + 16.0));
    }
    const C W = std::exp(32.0 * c);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        for (int l = 0; l < 4; ++l) {
            out[k + l] = T[l];
            T[l] *= U[l];
            U[l] *= W;
        }
    }
    for (; k < n; ++k) {
        const double t = static_cast<double>(k);
        out[k] = std::exp(a + b * t + c * (t * t));
    }
}

} // namespace

void line_avx2(std::complex<double> a, std::complex<double> b,
               std::complex<double> c, std::complex<double>* out, std::size_t n);

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

LineKernel get(Impl impl) {
    switch (impl) {
        case Impl::scalar: return &line_scalar;
        case Impl::unrolled: return &line_unrolled;
        case Impl::avx2:
#if defined(__x86_64__) || defined(__i386__)
            return cpu_has_avx2() ? &line_avx2 : nullptr;
#else
            return nullptr;
#endif
        case Impl::auto_select: return active();
    }
    return nullptr;
}

namespace {

struct Dispatch {
    LineKernel fn;
    const char* name;
};

Dispatch resolve() {
    if (const char* env = std::getenv("ABELTHETA_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return {&line_scalar, "scalar"};
        if (std::strcmp(env, "unrolled") == 0) return {&line_unrolled, "unrolled"};
        if (std::strcmp(env, "avx2") == 0) {
            if (LineKernel k = get(Impl::avx2)) return {k, "avx2"};
            return {&line_unrolled, "unrolled"};  // requested but unavailable
        }
    }
    if (LineKernel k = get(Impl::avx2)) return {k, "avx2"};
    return {&line_unrolled, "unrolled"};
}

const Dispatch& dispatch() {
    static const Dispatch d = resolve();
    return d;
}

} // namespace

LineKernel active() { return dispatch().fn; }
const char* active_name() { return dispatch().name; }

void eval_line_ext(std::complex<long double> a, std::complex<long double> b,
                   std::complex<long double> c, std::complex<long double>* out,
                   std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const long double t = static_cast<long double>(k);
        out[k] = std::exp(a + b * t + c * (t * t));
    }
}

} // namespace abeltheta::kernels
