#include "abeltheta/transform.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace abeltheta {

namespace {

constexpr double kPi = std::numbers::pi;

template <class Real>
using CMatT = detail::CMatT<Real>;
template <class Real>
using CVecT = detail::CVecT<Real>;
template <class Real>
using RVecT = detail::RVecT<Real>;

template <class Real>
CMatT<Real> rational_to_c(const QMat& m) {
    CMatT<Real> out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = std::complex<Real>(static_cast<Real>(to_double(m(i, j))), 0);
    return out;
}

std::complex<double> ipow_g(int g) {
    switch (((g % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// Extraction pipeline at a fixed working precision.
template <class Real>
TransformationResult transform_impl(const SymplecticElement& M, const PeriodMatrix& Z,
                                    const Characteristic& c, const TransformOptions& opt) {
    using C = std::complex<Real>;
    using MatX = CMatT<Real>;
    using VecX = CVecT<Real>;
    const Real pi = std::numbers::pi_v<Real>;
    const C pi_i(0, pi);
    const C two_pi_i(0, 2 * pi);

    const int g = Z.g();
    const std::int64_t d = Z.D.d;
    const int ns = opt.nsamples > 0 ? opt.nsamples : 2 * static_cast<int>(d) + 8;
    if (ns < d + 4) throw Error("nsamples must be at least d + 4");

    ActionVariant variant;
    const PeriodMatrix Zp = act_on_siegel(M, Z, &variant);
    const Characteristic Mc = transform_characteristic(M, c);

    const MatX Zr = Z.Z.cast<C>();
    const MatX Zpr = Zp.Z.cast<C>();
    const MatX A = rational_to_c<Real>(M.gamma) * Zr + rational_to_c<Real>(M.delta);
    const MatX At = A.transpose();
    const MatX gammaC = rational_to_c<Real>(M.gamma);
    // (gamma Z + delta)^{-1} gamma
    const MatX Ainv_gamma = A.partialPivLu().solve(gammaC);

    const RVecT<Real> c1 = c.c1.cast<Real>();
    const RVecT<Real> c2 = c.c2.cast<Real>();
    const RVecT<Real> Mc1 = Mc.c1.cast<Real>();
    const RVecT<Real> Mc2 = Mc.c2.cast<Real>();
    const RMat Dinv = Z.D.inverse_matrix();

    // kappa^{-1} = exp(pi i ^t M[c]^1 M[c]^2 - pi i ^t c^1 c^2)
    const C kappa_inv = std::exp(pi_i * (Mc1.dot(Mc2) - c1.dot(c2)));

    Rng rng(opt.seed);
    const Real eps = static_cast<Real>(opt.eps);

    MatX X(ns, d), Yv(ns, d);
    for (int s = 0; s < ns; ++s) {
        // v' in (1/2)([0,1)^g + Z'[0,1)^g), v = ^tA v'.
        VecX vp(g);
        {
            RVec t(g), u(g);
            for (int i = 0; i < g; ++i) t[i] = rng.uniform();
            for (int i = 0; i < g; ++i) u[i] = rng.uniform();
            const CVec vpd = 0.5 * (t.cast<std::complex<double>>() + Zp.Z * u);
            vp = vpd.cast<C>();
        }
        const VecX v = At * vp;

        // Reduce v = lam + v0 and carry the factor analytically:
        //   W = -pi i ^t lam1 Z lam1 - 2 pi i ^t v0 lam1 + pi i ^t v (gZ+d)^{-1} g v.
        CVec v_d(g);
        for (int i = 0; i < g; ++i)
            v_d[i] = std::complex<double>(static_cast<double>(v[i].real()),
                                          static_cast<double>(v[i].imag()));
        const ReducedArgument red = reduce_argument(Z, v_d);
        const RVecT<Real> l1 = red.lam.n1.cast<Real>();
        const RVecT<Real> l2 = red.lam.n2.cast<Real>();
        const VecX v0 = v - Zr * l1.template cast<C>() - l2.template cast<C>();

        C W = -pi_i * (l1.template cast<C>().transpose() * Zr * l1.template cast<C>())(0);
        W -= two_pi_i * (v0.transpose() * l1.template cast<C>())(0);
        W += pi_i * (v.transpose() * Ainv_gamma * v)(0);
        const C G = std::exp(W);

        for (std::int64_t mi = 0; mi < d; ++mi) {
            const auto m = Z.D.element(mi);
            RVec mv(g);
            for (int i = 0; i < g; ++i) mv[i] = static_cast<double>(m[i]);
            const RVecT<Real> cm1 = c1 + (Dinv * mv).cast<Real>();
            // twist exp(2 pi i E(c_m, lam)), E = ^t c1 lam2 - ^t c2 lam1
            const Real E = cm1.dot(l2) - c2.dot(l1);
            const C twist = std::exp(two_pi_i * E);
            const auto th = detail::theta_sum<Real>(Zr, cm1, c2, v0, eps, 60.0,
                                                    kernels::Impl::auto_select);
            Yv(s, mi) = G * twist * th.value * kappa_inv;
        }
        for (std::int64_t ni = 0; ni < d; ++ni) {
            const auto n = Zp.D.element(ni);
            RVec nv(g);
            for (int i = 0; i < g; ++i) nv[i] = static_cast<double>(n[i]);
            const RVecT<Real> cn1 = Mc1 + (Dinv * nv).cast<Real>();
            const auto th = detail::theta_sum<Real>(Zpr, cn1, Mc2, vp, eps, 60.0,
                                                    kernels::Impl::auto_select);
            X(s, ni) = th.value;
        }
    }

    // Least squares X * row_m(C)^T = Y_col_m, one factorization for all m.
    Eigen::ColPivHouseholderQR<MatX> qr(X);
    MatX Ct(d, d);
    Real worst = 0;
    for (std::int64_t mi = 0; mi < d; ++mi) {
        const VecX y = Yv.col(mi);
        const VecX coef = qr.solve(y);
        Ct.col(mi) = coef;
        const Real denom = y.norm();
        const Real resid = (X * coef - y).norm() / (denom > Real(0) ? denom : Real(1));
        worst = std::max(worst, resid);
    }
    const double conditioning = static_cast<double>(worst);
    if (conditioning > 100.0 * opt.eps)
        throw IllConditionedError("least-squares residual " + std::to_string(conditioning) +
                                  " exceeds 100 eps; resample advised");

    // The residual understates the error of coefficients living in the
    // near-null directions of X; amplify by the rank-revealing QR estimate.
    const auto& Rdiag = qr.matrixR();
    const Real r00 = std::abs(Rdiag(0, 0));
    const Real rdd = std::abs(Rdiag(d - 1, d - 1));
    const Real kappa = rdd > Real(0) ? r00 / rdd : std::numeric_limits<Real>::max();
    const Real round_unit = std::numeric_limits<Real>::epsilon();
    const double entry_error =
        static_cast<double>(kappa * std::max(worst, Real(10) * round_unit));
    if (entry_error > opt.entry_error_cap)
        throw IllConditionedError("estimated coefficient error " + std::to_string(entry_error) +
                                  " exceeds the cap; resample advised");

    TransformationResult out;
    out.variant = variant;
    out.conditioning = conditioning;
    out.entry_error = entry_error;
    out.C = CMat(d, d);
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t j = 0; j < d; ++j) {
            const C cij = Ct(j, i);  // C_{mn} with m = i
            out.C(i, j) = std::complex<double>(static_cast<double>(cij.real()),
                                               static_cast<double>(cij.imag()));
        }

    const C detA = A.partialPivLu().determinant();
    const C sdet = std::sqrt(detA);  // principal branch
    out.C_M = CMat(d, d);
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t j = 0; j < d; ++j) {
            const C cij = sdet * Ct(j, i);
            out.C_M(i, j) = std::complex<double>(static_cast<double>(cij.real()),
                                                 static_cast<double>(cij.imag()));
        }

    const C detC = MatX(Ct.transpose()).partialPivLu().determinant();
    C detCM = detC;
    for (std::int64_t k = 0; k < d; ++k) detCM *= sdet;
    out.detCM = std::complex<double>(static_cast<double>(detCM.real()),
                                     static_cast<double>(detCM.imag()));
    out.order = root_of_unity_order(out.detCM, opt.max_order, opt.order_tol);
    if (opt.variant_out) *opt.variant_out = variant;
    return out;
}

} // namespace

std::complex<double> h_psi(const SymplecticElement& M, const PeriodMatrix& Z, const CVec& v) {
    const CMat A = cocycle_matrix(M, Z);
    CMat gammaC(Z.g(), Z.g());
    for (int i = 0; i < Z.g(); ++i)
        for (int j = 0; j < Z.g(); ++j) gammaC(i, j) = to_double(M.gamma(i, j));
    const CMat Ag = A.partialPivLu().solve(gammaC);
    const std::complex<double> q = (v.transpose() * Ag * v)(0);
    return std::exp(std::complex<double>(0, kPi) * q);
}

TransformationResult transformation_matrix(const SymplecticElement& M, const PeriodMatrix& Z,
                                           const Characteristic& c,
                                           const TransformOptions& opt) {
    if (!c.is_half(Z.D))
        throw HypothesisError("transformation_matrix requires a half-characteristic");
    if (Z.D.d > 12 || opt.force_extended)
        return transform_impl<long double>(M, Z, c, opt);
    return transform_impl<double>(M, Z, c, opt);
}

CMat cm_fourier_generator(const PolarizationType& D) {
    const std::int64_t d = D.d;
    const int g = D.g();
    const std::complex<double> scale =
        std::pow(std::complex<double>(static_cast<double>(d), 0.0) / ipow_g(g), -0.5);
    CMat out(d, d);
    for (std::int64_t mi = 0; mi < d; ++mi) {
        const auto m = D.element(mi);
        for (std::int64_t ni = 0; ni < d; ++ni) {
            const auto n = D.element(ni);
            double phase = 0.0;
            for (int i = 0; i < g; ++i)
                phase += static_cast<double>(m[i]) * static_cast<double>(n[i]) /
                         static_cast<double>(D.diag[i]);
            out(mi, ni) = scale * std::exp(std::complex<double>(0, 2.0 * kPi * phase));
        }
    }
    return out;
}

namespace {

Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>
dft_matrix_ld(const PolarizationType& D) {
    const std::int64_t d = D.d;
    const int g = D.g();
    const long double pi = std::numbers::pi_v<long double>;
    Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> A(d, d);
    for (std::int64_t mi = 0; mi < d; ++mi) {
        const auto m = D.element(mi);
        for (std::int64_t ni = 0; ni < d; ++ni) {
            const auto n = D.element(ni);
            long double phase = 0;
            for (int i = 0; i < g; ++i)
                phase += static_cast<long double>(m[i]) * static_cast<long double>(n[i]) /
                         static_cast<long double>(D.diag[i]);
            A(mi, ni) = std::exp(std::complex<long double>(0, 2 * pi * phase));
        }
    }
    return A;
}

} // namespace

DftResult dft_determinant(const PolarizationType& D, std::int64_t cap) {
    if (D.d > cap) throw CapExceededError("d exceeds the DFT determinant cap");
    const auto A = dft_matrix_ld(D);
    const std::complex<long double> det = A.partialPivLu().determinant();
    const long double mag = std::pow(static_cast<long double>(D.d),
                                     static_cast<long double>(D.d) / 2.0L);
    const std::complex<long double> z4 = det / mag;
    DftResult out;
    out.det = std::complex<double>(static_cast<double>(det.real()),
                                   static_cast<double>(det.imag()));
    out.zeta4 = std::complex<double>(static_cast<double>(z4.real()),
                                     static_cast<double>(z4.imag()));
    const std::complex<double> z4_4 = std::pow(out.zeta4, 4);
    if (std::abs(z4_4 - 1.0) > 1e-8)
        throw IdentityError("det A / d^{d/2} is not a 4th root of unity");
    return out;
}

std::complex<double> dft_determinant_tensor_oracle(const PolarizationType& D) {
    std::complex<long double> det(1, 0);
    for (int i = 0; i < D.g(); ++i) {
        PolarizationType Di = validate_polarization({D.diag[i]});
        const auto Ci = dft_matrix_ld(Di);
        const std::complex<long double> di = Ci.partialPivLu().determinant();
        const std::int64_t e = D.d / D.diag[i];
        for (std::int64_t k = 0; k < e; ++k) det *= di;
    }
    return {static_cast<double>(det.real()), static_cast<double>(det.imag())};
}

int permutation_sign_delta(const SymplecticElement& M, std::int64_t cap) {
    if (!M.integral)
        throw HypothesisError("permutation sign requires an integral element of G_D");
    const PolarizationType& D = M.D;
    if (D.d > cap) throw CapExceededError("d exceeds the permutation enumeration cap");
    const int g = D.g();
    const IMat Delta = GammaDElement{D, M.R}.blockDelta();

    std::vector<std::int64_t> image(D.d, -1);
    std::vector<bool> hit(D.d, false);
    for (std::int64_t idx = 0; idx < D.d; ++idx) {
        const auto m = D.element(idx);
        std::vector<std::int64_t> out(g, 0);
        for (int i = 0; i < g; ++i) {
            Int acc = 0;
            for (int j = 0; j < g; ++j) acc += Delta(i, j) * Int(m[j]);
            Int r = acc % Int(D.diag[i]);
            if (r < 0) r += Int(D.diag[i]);
            out[i] = to_int64(r);
        }
        const std::int64_t target = D.index_of(out);
        image[idx] = target;
        if (hit[target])
            throw NotBijectiveError("Delta does not act bijectively on Z_D");
        hit[target] = true;
    }

    int sign = 1;
    std::vector<bool> seen(D.d, false);
    for (std::int64_t i = 0; i < D.d; ++i) {
        if (seen[i]) continue;
        std::int64_t len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = image[j];
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

std::optional<int> root_of_unity_order(std::complex<double> z, int max_order, double tol) {
    if (max_order > 48) throw Error("max_order capped at 48");
    if (std::abs(std::abs(z) - 1.0) >= tol) return std::nullopt;
    std::complex<double> p(1, 0);
    for (int n = 1; n <= max_order; ++n) {
        p *= z;
        if (std::abs(p - 1.0) < tol) return n;
    }
    return std::nullopt;
}

bool exceptional_type(const PolarizationType& D) {
    const std::int64_t dg = D.diag.back();
    const std::int64_t dg1 = D.g() >= 2 ? D.diag[D.g() - 2] : 1;  // d_0 := 1
    return dg % 3 == 0 && std::gcd<std::int64_t, std::int64_t>(3, dg1) == 1;
}

Classification classify(const SymplecticElement& M, const PeriodMatrix& Z,
                        const Characteristic& c, BundleMode mode,
                        const TransformOptions& opt) {
    const bool exceptional = exceptional_type(Z.D);
    if (mode == BundleMode::totally_symmetric) {
        if (!c.is_zero())
            throw HypothesisError("totally symmetric mode requires characteristic 0");
        for (auto di : Z.D.diag)
            if (di % 2 != 0)
                throw HypothesisError("totally symmetric mode requires even type");
        if (Z.g() < 3) throw HypothesisError("totally symmetric mode requires g >= 3");
    } else if (!c.is_half(Z.D)) {
        throw HypothesisError("symmetric mode requires a half-characteristic");
    }

    const TransformationResult tr = transformation_matrix(M, Z, c, opt);

    Classification cls;
    cls.detCM = tr.detCM;
    cls.order = tr.order;
    cls.conditioning = tr.conditioning;
    cls.order_bound = (mode == BundleMode::symmetric) ? (exceptional ? 24 : 8)
                                                      : (exceptional ? 3 : 1);

    if (std::abs(std::abs(tr.detCM) - 1.0) > 1e-6)
        throw ClassificationError("det C_M is off the unit circle: |detCM| = " +
                                  std::to_string(std::abs(tr.detCM)));
    std::complex<double> p(1, 0);
    for (int k = 0; k < cls.order_bound; ++k) p *= tr.detCM;
    if (std::abs(p - 1.0) > opt.order_tol) {
        throw ClassificationError("det C_M = (" + std::to_string(tr.detCM.real()) + ", " +
                                  std::to_string(tr.detCM.imag()) + ") is not a " +
                                  std::to_string(cls.order_bound) + "-th root of unity");
    }
    return cls;
}

} // namespace abeltheta
