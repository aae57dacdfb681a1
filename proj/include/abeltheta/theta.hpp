#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "abeltheta/kernels.hpp"
#include "abeltheta/types.hpp"

namespace abeltheta {

struct ThetaOptions {
    double eps = 1e-10;       // requested truncation error, relative
    double radius_cap = 60.0; // per-dimension cap on the enumeration half-width
    bool extended = false;    // accumulate in long double
    kernels::Impl kernel = kernels::Impl::auto_select;
};

struct ThetaValue {
    std::complex<double> value;
    double radius = 0.0;   // ellipsoid radius used
    std::size_t terms = 0; // lattice points summed
};

// theta[c1; c2](v, Z) = sum over n in Z^g of
//   exp( pi i ^t(n+c1) Z (n+c1) + 2 pi i ^t(v+c2)(n+c1) ).
// Truncated to the ellipsoid ^t(x-mu) Y (x-mu) <= R^2, x = n + c1, with
// Y = Im Z, mu = -Y^{-1} Im v (the Gaussian center; the shift by v and by c1
// is handled exactly by centering) and the quadratic-form cutoff
//   R^2 = (-ln eps + g ln 10) / pi.
// Terms are generated line-by-line by the kernel and reduced in order of
// increasing |n|, ties by enumeration order, so results are reproducible.
ThetaValue theta_char(const Characteristic& c, const CVec& v, const PeriodMatrix& Z,
                      const ThetaOptions& opt = {});

// The tuple { theta[c1 + D^{-1} m; c2](v, Z) : m in Z_D }, m enumerated
// lexicographically with the last coordinate fastest.
struct ThetaBasis {
    Characteristic c;
    std::vector<std::complex<double>> values;
    double eps = 0.0;
    double radius = 0.0;
};
ThetaBasis theta_basis(const Characteristic& c, const PeriodMatrix& Z, const CVec& v,
                       const ThetaOptions& opt = {});

enum class FactorKind { canonical, classical };

// Factor of automorphy for L(H_Z, chi) of characteristic c, evaluated at a
// lattice vector.  classical:
//   e(lam, v) = exp(2 pi i E(c, lam)) exp(-pi i ^t lam1 Z lam1 - 2 pi i ^t v lam1)
// canonical:
//   a(lam, v) = exp(2 pi i E(c, lam)) exp(pi i ^t lam1 lam2
//               + pi ^t v Y^{-1} conj(lam) + (pi/2) ^t lam Y^{-1} conj(lam)).
std::complex<double> automorphy_factor(FactorKind kind, const Characteristic& c,
                                       const PeriodMatrix& Z, const LatticeVector& lam,
                                       const CVec& v);

// h(v) = exp((pi/2) ^t v Y^{-1} v); e = a * h in the equivalence sense
// f'(lam,v) = f(lam,v) h(v) h(v+lam)^{-1}.
std::complex<double> factor_equivalence_h(const PeriodMatrix& Z, const CVec& v);

// Canonical factor extended to w in Lambda(H), w = Z w1 + w2 with
// w1 in D^{-1}Z^g, w2 in Z^g.
std::complex<double> canonical_factor_at(const Characteristic& c, const PeriodMatrix& Z,
                                         const RVec& w1, const RVec& w2, const CVec& v);

// theta^c_0(v), normalized through the series:
//   theta^c_0(v) = exp((pi/2) B(v,v) - pi i ^t c1 c2) theta[c1; c2](v, Z).
std::complex<double> canonical_theta_base(const Characteristic& c, const CVec& v,
                                          const PeriodMatrix& Z, const ThetaOptions& opt = {});

// theta^c_{Z w1}(v) for Z w1 in Lambda(H)_1, obtained by inverting
//   theta[c1+w1; c2](v,Z) = exp(-(pi/2)B(v,v) + pi i ^t c1 c2) theta^c_{Z w1}(v).
// Throws MembershipError when D w1 is not integral.
std::complex<double> canonical_theta(const Characteristic& c, const RVec& w1, const CVec& v,
                                     const PeriodMatrix& Z, const ThetaOptions& opt = {});

// theta^c_w(v) = a_{(H,chi)}(w, v)^{-1} theta^c_0(v + w) for w in Lambda(H).
std::complex<double> canonical_theta_translate(const Characteristic& c, const RVec& w1,
                                               const RVec& w2, const CVec& v,
                                               const PeriodMatrix& Z,
                                               const ThetaOptions& opt = {});

// Nearest lattice point and remainder: v = lam + v0 with lam = Z n1 + n2,
// n1 = round(v1), n2 = D round(D^{-1} v2).
struct ReducedArgument {
    LatticeVector lam;
    CVec v0;
};
ReducedArgument reduce_argument(const PeriodMatrix& Z, const CVec& v);

namespace detail {

template <class Real>
struct ThetaSum {
    std::complex<Real> value{};
    double radius = 0.0;
    std::size_t terms = 0;
};

template <class Real>
using CMatT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVecT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVecT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Core lattice sum; explicit instantiations for double and long double.
template <class Real>
ThetaSum<Real> theta_sum(const CMatT<Real>& Z, const RVecT<Real>& c1, const RVecT<Real>& c2,
                         const CVecT<Real>& v, Real eps, double radius_cap,
                         kernels::Impl kernel);

} // namespace detail

} // namespace abeltheta
