#include "abeltheta/theta.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace abeltheta {

namespace detail {

namespace {

template <class Real>
void eval_line(std::complex<Real> a, std::complex<Real> b, std::complex<Real> c,
               std::complex<Real>* out, std::size_t n, kernels::LineKernel kfn) {
    if constexpr (std::is_same_v<Real, double>) {
        kfn(a, b, c, out, n);
    } else {
        (void)kfn;
        kernels::eval_line_ext(a, b, c, out, n);
    }
}

} // namespace

template <class Real>
ThetaSum<Real> theta_sum(const CMatT<Real>& Z, const RVecT<Real>& c1, const RVecT<Real>& c2,
                         const CVecT<Real>& v, Real eps, double radius_cap,
                         kernels::Impl kernel) {
    using C = std::complex<Real>;
    using RV = RVecT<Real>;
    using RM = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    const int g = static_cast<int>(Z.rows());
    const Real pi = std::numbers::pi_v<Real>;
    const C pi_i(0, pi);

    RM Y(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) Y(i, j) = Z(i, j).imag();
    Eigen::SelfAdjointEigenSolver<RM> es(Y);
    const Real ymin = es.eigenvalues().minCoeff();
    if (!(ymin > Real(0)))
        throw NotPositiveDefiniteError("Im Z lost positive definiteness");

    RM Yinv = es.eigenvectors()
              * es.eigenvalues().cwiseInverse().asDiagonal()
              * es.eigenvectors().transpose();

    RV im_v(g);
    for (int i = 0; i < g; ++i) im_v[i] = v[i].imag();
    const RV mu = -(Yinv * im_v);  // Gaussian center in x = n + c1 space
    const RV nu = mu - c1;         // same center in n space

    // Cutoff on the quadratic form itself: terms outside
    // ^t(x-mu) Y (x-mu) <= Q have magnitude below eps 10^{-g} relative to
    // the peak, and the 10^{-g} margin absorbs the lattice point count.
    const Real R2 = (-std::log(eps) + Real(g) * std::log(Real(10))) / pi;
    const Real R = std::sqrt(R2);

    std::vector<std::int64_t> lo(g), hi(g);
    for (int i = 0; i < g; ++i) {
        const Real hw = std::sqrt(R2 * Yinv(i, i));
        if (static_cast<double>(hw) > radius_cap)
            throw ConvergenceError("required truncation radius exceeds the configured cap");
        lo[i] = static_cast<std::int64_t>(std::ceil(static_cast<double>(nu[i] - hw)));
        hi[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(nu[i] + hw)));
        if (lo[i] > hi[i]) {
            // no lattice point meets the cutoff; every term is below eps
            ThetaSum<Real> out;
            out.radius = static_cast<double>(R);
            return out;
        }
    }

    kernels::LineKernel kfn = nullptr;
    if constexpr (std::is_same_v<Real, double>) {
        kfn = kernels::get(kernel);
        if (!kfn) kfn = kernels::active();
    }

    const CVecT<Real> w = v + c2.template cast<C>();

    std::vector<C> terms;
    std::vector<std::int64_t> norm2;
    std::vector<C> buf;

    std::vector<std::int64_t> n(g, 0);

    // Enumerate outer coordinates lexicographically over the bounding box;
    // the innermost coordinate runs over the exact ellipsoid section and is
    // evaluated as one kernel line.
    const int inner = g - 1;
    for (int i = 0; i < inner; ++i) n[i] = lo[i];

    auto emit_line = [&]() {
        // p(t) = x0 + t e_g with x0_i = n_i + c1_i - mu_i (i < g), x0_g = c1_g - mu_g.
        RV x0(g);
        for (int i = 0; i < inner; ++i) x0[i] = static_cast<Real>(n[i]) + c1[i] - mu[i];
        x0[inner] = c1[inner] - mu[inner];
        const Real A = Y(inner, inner);
        const Real B = Real(2) * (Y.row(inner) * x0)(0);
        const Real Cq = (x0.transpose() * Y * x0)(0) - R2;
        const Real disc = B * B - Real(4) * A * Cq;
        if (disc < Real(0)) return;
        const Real sq = std::sqrt(disc);
        std::int64_t t_lo = static_cast<std::int64_t>(std::ceil(static_cast<double>((-B - sq) / (Real(2) * A))));
        std::int64_t t_hi = static_cast<std::int64_t>(std::floor(static_cast<double>((-B + sq) / (Real(2) * A))));
        t_lo = std::max(t_lo, lo[inner]);
        t_hi = std::min(t_hi, hi[inner]);
        if (t_lo > t_hi) return;
        const std::size_t len = static_cast<std::size_t>(t_hi - t_lo + 1);

        RV u(g);  // base lattice point + c1
        for (int i = 0; i < inner; ++i) u[i] = static_cast<Real>(n[i]) + c1[i];
        u[inner] = static_cast<Real>(t_lo) + c1[inner];

        const CVecT<Real> Zu = Z * u.template cast<C>();
        C a(0, 0);
        for (int i = 0; i < g; ++i) a += u[i] * Zu[i];
        a *= pi_i;
        C wu(0, 0);
        for (int i = 0; i < g; ++i) wu += w[i] * u[i];
        a += Real(2) * pi_i * wu;
        const C b = Real(2) * pi_i * (Zu[inner] + w[inner]);
        const C cq = pi_i * Z(inner, inner);

        buf.resize(len);
        eval_line<Real>(a, b, cq, buf.data(), len, kfn);

        std::int64_t base2 = 0;
        for (int i = 0; i < inner; ++i) base2 += n[i] * n[i];
        for (std::size_t k = 0; k < len; ++k) {
            const std::int64_t t = t_lo + static_cast<std::int64_t>(k);
            terms.push_back(buf[k]);
            norm2.push_back(base2 + t * t);
        }
    };

    if (g == 1) {
        emit_line();
    } else {
        while (true) {
            emit_line();
            int i = inner - 1;
            while (i >= 0 && n[i] == hi[i]) {
                n[i] = lo[i];
                --i;
            }
            if (i < 0) break;
            ++n[i];
        }
    }

    // Deterministic reduction: increasing |n|^2, ties in enumeration order.
    std::vector<std::size_t> order(terms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return norm2[p] < norm2[q]; });

    C sum(0, 0);
    for (std::size_t idx : order) sum += terms[idx];

    ThetaSum<Real> out;
    out.value = sum;
    out.radius = static_cast<double>(R);
    out.terms = terms.size();
    return out;
}

template ThetaSum<double> theta_sum<double>(const CMatT<double>&, const RVecT<double>&,
                                            const RVecT<double>&, const CVecT<double>&, double,
                                            double, kernels::Impl);
template ThetaSum<long double> theta_sum<long double>(const CMatT<long double>&,
                                                      const RVecT<long double>&,
                                                      const RVecT<long double>&,
                                                      const CVecT<long double>&, long double,
                                                      double, kernels::Impl);

} // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kPiI(0.0, kPi);
const std::complex<double> kTwoPiI(0.0, 2.0 * kPi);

std::complex<double> bform(const PeriodMatrix& Z, const CVec& a, const CVec& b) {
    Eigen::PartialPivLU<RMat> lu(Z.imag());
    CMat Yi = lu.inverse().cast<std::complex<double>>();
    return (a.transpose() * Yi * b)(0);
}

} // namespace

ThetaValue theta_char(const Characteristic& c, const CVec& v, const PeriodMatrix& Z,
                      const ThetaOptions& opt) {
    if (opt.eps <= 0.0 || opt.eps > 1e-3)
        throw Error("eps must lie in (0, 1e-3]");
    ThetaValue out;
    if (opt.extended) {
        auto s = detail::theta_sum<long double>(
            Z.Z.cast<std::complex<long double>>(), c.c1.cast<long double>(),
            c.c2.cast<long double>(), v.cast<std::complex<long double>>(),
            static_cast<long double>(opt.eps), opt.radius_cap, opt.kernel);
        out.value = std::complex<double>(static_cast<double>(s.value.real()),
                                         static_cast<double>(s.value.imag()));
        out.radius = s.radius;
        out.terms = s.terms;
    } else {
        auto s = detail::theta_sum<double>(Z.Z, c.c1, c.c2, v, opt.eps, opt.radius_cap,
                                           opt.kernel);
        out.value = s.value;
        out.radius = s.radius;
        out.terms = s.terms;
    }
    return out;
}

ThetaBasis theta_basis(const Characteristic& c, const PeriodMatrix& Z, const CVec& v,
                       const ThetaOptions& opt) {
    ThetaBasis basis;
    basis.c = c;
    basis.eps = opt.eps;
    const RMat Dinv = Z.D.inverse_matrix();
    basis.values.reserve(Z.D.d);
    for (std::int64_t idx = 0; idx < Z.D.d; ++idx) {
        auto m = Z.D.element(idx);
        RVec mv(Z.g());
        for (int i = 0; i < Z.g(); ++i) mv[i] = static_cast<double>(m[i]);
        Characteristic cm{c.c1 + Dinv * mv, c.c2};
        ThetaValue t = theta_char(cm, v, Z, opt);
        basis.values.push_back(t.value);
        basis.radius = std::max(basis.radius, t.radius);
    }
    return basis;
}

std::complex<double> automorphy_factor(FactorKind kind, const Characteristic& c,
                                       const PeriodMatrix& Z, const LatticeVector& lam,
                                       const CVec& v) {
    const RVec l1 = lam.n1.cast<double>();
    const RVec l2 = lam.n2.cast<double>();
    const double E_c_lam = c.c1.dot(l2) - c.c2.dot(l1);
    const std::complex<double> twist = std::exp(kTwoPiI * E_c_lam);
    if (kind == FactorKind::classical) {
        const CVec l1c = l1.cast<std::complex<double>>();
        const std::complex<double> q = (l1c.transpose() * Z.Z * l1c)(0);
        const std::complex<double> lin = (v.transpose() * l1c)(0);  // ^t v l1
        return twist * std::exp(-kPiI * q - kTwoPiI * lin);
    }
    const CVec lv = lam.value(Z);
    const std::complex<double> s = std::exp(kPiI * l1.dot(l2));
    const std::complex<double> h1 = bform(Z, v, lv.conjugate());
    const std::complex<double> h2 = bform(Z, lv, lv.conjugate());
    return twist * s * std::exp(kPi * h1 + 0.5 * kPi * h2);
}

std::complex<double> factor_equivalence_h(const PeriodMatrix& Z, const CVec& v) {
    return std::exp(0.5 * kPi * bform(Z, v, v));
}

std::complex<double> canonical_factor_at(const Characteristic& c, const PeriodMatrix& Z,
                                         const RVec& w1, const RVec& w2, const CVec& v) {
    const double E_c_w = c.c1.dot(w2) - c.c2.dot(w1);
    const CVec wv = Z.Z * w1 + w2.cast<std::complex<double>>();
    const std::complex<double> s = std::exp(kPiI * w1.dot(w2));
    const std::complex<double> h1 = bform(Z, v, wv.conjugate());
    const std::complex<double> h2 = bform(Z, wv, wv.conjugate());
    return std::exp(kTwoPiI * E_c_w) * s * std::exp(kPi * h1 + 0.5 * kPi * h2);
}

std::complex<double> canonical_theta_base(const Characteristic& c, const CVec& v,
                                          const PeriodMatrix& Z, const ThetaOptions& opt) {
    const std::complex<double> pref =
        std::exp(0.5 * kPi * bform(Z, v, v) - kPiI * c.c1.dot(c.c2));
    return pref * theta_char(c, v, Z, opt).value;
}

std::complex<double> canonical_theta(const Characteristic& c, const RVec& w1, const CVec& v,
                                     const PeriodMatrix& Z, const ThetaOptions& opt) {
    if (!nearly_integral(Z.D.matrix() * w1))
        throw MembershipError("w is not in Lambda(H)_1: D w1 must be integral");
    Characteristic shifted{c.c1 + w1, c.c2};
    const std::complex<double> pref =
        std::exp(0.5 * kPi * bform(Z, v, v) - kPiI * c.c1.dot(c.c2));
    return pref * theta_char(shifted, v, Z, opt).value;
}

std::complex<double> canonical_theta_translate(const Characteristic& c, const RVec& w1,
                                               const RVec& w2, const CVec& v,
                                               const PeriodMatrix& Z, const ThetaOptions& opt) {
    if (!nearly_integral(Z.D.matrix() * w1) || !nearly_integral(w2))
        throw MembershipError("w is not in Lambda(H)");
    const CVec wv = Z.Z * w1 + w2.cast<std::complex<double>>();
    const std::complex<double> a = canonical_factor_at(c, Z, w1, w2, v);
    return canonical_theta_base(c, v + wv, Z, opt) / a;
}

ReducedArgument reduce_argument(const PeriodMatrix& Z, const CVec& v) {
    Decomposition d = decompose_vector(Z, v);
    const int g = Z.g();
    Eigen::VectorXi n1(g), n2(g);
    for (int i = 0; i < g; ++i) {
        const long long r1 = std::llround(d.v1[i]);
        const double q = d.v2[i] / static_cast<double>(Z.D.diag[i]);
        const long long r2 = Z.D.diag[i] * std::llround(q);
        if (std::abs(r1) > (1 << 30) || std::abs(r2) > (1 << 30))
            throw Error("argument too far from the fundamental domain to reduce");
        n1[i] = static_cast<int>(r1);
        n2[i] = static_cast<int>(r2);
    }
    ReducedArgument out;
    out.lam = LatticeVector{n1, n2};
    out.v0 = v - out.lam.value(Z);
    return out;
}

} // namespace abeltheta
