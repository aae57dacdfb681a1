// Micro-benchmark for the exp-quadratic line kernels.  Not a test; run it
// after touching the kernels to confirm the variants still earn their keep.

#include <chrono>
#include <cstdio>
#include <vector>

#include "abeltheta/kernels.hpp"

using namespace abeltheta::kernels;

namespace {

double time_kernel(LineKernel k, std::size_t line_len, int reps) {
    std::vector<std::complex<double>> buf(line_len);
    const std::complex<double> a(0.1, -2.0), b(-0.3, 1.7), c(-0.05, 0.4);
    for (int r = 0; r < reps / 10; ++r) k(a, b, c, buf.data(), buf.size());
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) k(a, b, c, buf.data(), buf.size());
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::nano>(t1 - t0).count() /
           (static_cast<double>(reps) * static_cast<double>(line_len));
}

} // namespace

int main() {
    const int reps = 60000;
    std::printf("%-10s %10s %10s %10s\n", "kernel", "len=16", "len=64", "len=256");
    const struct {
        Impl impl;
        const char* name;
    } impls[] = {{Impl::scalar, "scalar"}, {Impl::unrolled, "unrolled"}, {Impl::avx2, "avx2"}};
    for (const auto& it : impls) {
        LineKernel k = get(it.impl);
        if (!k) {
            std::printf("%-10s unavailable on this host\n", it.name);
            continue;
        }
        std::printf("%-10s %7.2f ns %7.2f ns %7.2f ns\n", it.name, time_kernel(k, 16, reps),
                    time_kernel(k, 64, reps), time_kernel(k, 256, reps));
    }
    std::printf("dispatch selects: %s\n", active_name());
    return 0;
}
