#include "naive_theta.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace abeltheta::accept {

std::complex<double> naive_theta(const Characteristic& c, const CVec& v, const PeriodMatrix& Z,
                                 double eps, int extra) {
    const int g = Z.g();
    const double pi = std::numbers::pi;

    const RMat Y = Z.imag();
    Eigen::SelfAdjointEigenSolver<RMat> es(Y);
    const double ymin = es.eigenvalues().minCoeff();
    const RMat Yinv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
    const RVec center = -(Yinv * v.imag()) - c.c1;
    const double Q = (-std::log(eps) + g * std::log(10.0)) / pi;
    (void)ymin;

    std::vector<std::int64_t> lo(g), hi(g);
    for (int i = 0; i < g; ++i) {
        const double hw = std::sqrt(Q * Yinv(i, i)) + extra;
        lo[i] = static_cast<std::int64_t>(std::floor(center[i] - hw));
        hi[i] = static_cast<std::int64_t>(std::ceil(center[i] + hw));
    }

    using CL = std::complex<long double>;
    const Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic> Zl =
        Z.Z.cast<CL>();
    const Eigen::Matrix<CL, Eigen::Dynamic, 1> w =
        (v + c.c2.cast<std::complex<double>>()).cast<CL>();
    const CL pi_i(0.0L, std::numbers::pi_v<long double>);

    CL sum(0, 0);
    std::vector<std::int64_t> n(g, 0);
    for (int i = 0; i < g; ++i) n[i] = lo[i];
    while (true) {
        Eigen::Matrix<CL, Eigen::Dynamic, 1> x(g);
        for (int i = 0; i < g; ++i)
            x[i] = CL(static_cast<long double>(n[i]) + static_cast<long double>(c.c1[i]), 0.0L);
        const CL quad = (x.transpose() * Zl * x)(0);
        const CL lin = (w.transpose() * x)(0);
        sum += std::exp(pi_i * quad + 2.0L * pi_i * lin);

        int i = g - 1;
        while (i >= 0 && n[i] == hi[i]) {
            n[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++n[i];
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

} // namespace abeltheta::accept
