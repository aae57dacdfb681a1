#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "abeltheta/theta.hpp"
#include "naive_theta.hpp"
#include "support.hpp"

using namespace abeltheta;

namespace {

const std::complex<double> I(0, 1);

PeriodMatrix pm1(std::complex<double> z, std::int64_t d = 1) {
    CMat Z(1, 1);
    Z(0, 0) = z;
    return validate_period_matrix(Z, validate_polarization({d}));
}

} // namespace

TEST_CASE("theta series reference values") {
    const PeriodMatrix Z = pm1(I);
    const CVec v0 = CVec::Zero(1);

    // frozen against a 20-term direct summation
    const ThetaValue t = theta_char(Characteristic::zero(1), v0, Z);
    CHECK(std::abs(t.value - 1.086434811213308) < 1e-10);
    CHECK(t.radius > 0.0);
    CHECK(t.terms >= 5);

    // odd characteristic: summands for n and -n-1 cancel pairwise
    Characteristic half = Characteristic::zero(1);
    half.c1[0] = 0.5;
    half.c2[0] = 0.5;
    CHECK(std::abs(theta_char(half, v0, Z).value) < 1e-12);

    // theta[1/2; 0](0, i), frozen via direct summation
    Characteristic c10 = Characteristic::zero(1);
    c10.c1[0] = 0.5;
    CHECK(std::abs(theta_char(c10, v0, Z).value - 0.913579138156117) < 1e-10);
}

TEST_CASE("product structure over diagonal period matrices") {
    CMat Z2(2, 2);
    Z2 << I, 0.0, 0.0, I;
    const PeriodMatrix Z = validate_period_matrix(Z2, validate_polarization({1, 1}));
    const std::complex<double> v2 =
        theta_char(Characteristic::zero(2), CVec::Zero(2), Z).value;
    const std::complex<double> v1 = theta_char(Characteristic::zero(1), CVec::Zero(1), pm1(I)).value;
    CHECK(std::abs(v2 - v1 * v1) < 1e-9);
}

TEST_CASE("eps validation and convergence cap") {
    const PeriodMatrix Z = pm1(I);
    ThetaOptions bad;
    bad.eps = 0.5;
    CHECK_THROWS_AS(theta_char(Characteristic::zero(1), CVec::Zero(1), Z, bad), Error);

    // tiny Im Z forces a radius beyond the cap
    const PeriodMatrix thin = pm1(1e-6 * I);
    ThetaOptions opt;
    opt.radius_cap = 40.0;
    CHECK_THROWS_AS(theta_char(Characteristic::zero(1), CVec::Zero(1), thin, opt),
                    ConvergenceError);
}

TEST_CASE("automorphy factor examples") {
    const PeriodMatrix Z = pm1(I);
    const Characteristic c0 = Characteristic::zero(1);
    Eigen::VectorXi zero1 = Eigen::VectorXi::Zero(1);

    // lam with lam1 = 0 gives 1 for every v
    Eigen::VectorXi n2(1);
    n2 << 3;
    const LatticeVector lam2 = make_lattice_vector(zero1, n2, Z.D);
    CVec v(1);
    v[0] = 0.3 + 0.2 * I;
    CHECK(std::abs(automorphy_factor(FactorKind::classical, c0, Z, lam2, v) - 1.0) < 1e-12);

    // lam = Z*1: e(-pi i ^t lam1 Z lam1) = e^pi at v = 0
    Eigen::VectorXi n1(1);
    n1 << 1;
    const LatticeVector lam1 = make_lattice_vector(n1, zero1, Z.D);
    const std::complex<double> f =
        automorphy_factor(FactorKind::classical, c0, Z, lam1, CVec::Zero(1));
    CHECK(std::abs(f - std::exp(std::numbers::pi)) < 1e-9);
}

TEST_CASE("canonical vs classical factor ratio is h(v)/h(v+lam)") {
    Rng rng(11);
    const PolarizationType D = validate_polarization({1, 2});
    for (int t = 0; t < 25; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        Eigen::VectorXi n1(2), n2(2);
        for (int i = 0; i < 2; ++i) {
            n1[i] = static_cast<int>(rng.uniform_int(-2, 2));
            n2[i] = static_cast<int>(D.diag[i] * rng.uniform_int(-2, 2));
        }
        const LatticeVector lam = make_lattice_vector(n1, n2, D);
        const CVec v = accept::random_point(rng, 2, 0.5);
        const std::complex<double> e = automorphy_factor(FactorKind::classical, c, Z, lam, v);
        const std::complex<double> a = automorphy_factor(FactorKind::canonical, c, Z, lam, v);
        const std::complex<double> ratio =
            factor_equivalence_h(Z, v) / factor_equivalence_h(Z, v + lam.value(Z));
        CHECK(std::abs(e / a - ratio) < 1e-9 * std::abs(ratio));
    }
}

TEST_CASE("factor cocycle f(lam+mu, v) = f(lam, mu+v) f(mu, v)") {
    Rng rng(12);
    const PolarizationType D = validate_polarization({2});
    for (int t = 0; t < 25; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        Eigen::VectorXi a1(1), a2(1), b1(1), b2(1);
        a1 << static_cast<int>(rng.uniform_int(-2, 2));
        a2 << static_cast<int>(2 * rng.uniform_int(-2, 2));
        b1 << static_cast<int>(rng.uniform_int(-2, 2));
        b2 << static_cast<int>(2 * rng.uniform_int(-2, 2));
        const LatticeVector lam = make_lattice_vector(a1, a2, D);
        const LatticeVector mu = make_lattice_vector(b1, b2, D);
        const LatticeVector sum = make_lattice_vector(a1 + b1, a2 + b2, D);
        const CVec v = accept::random_point(rng, 1, 0.4);
        for (FactorKind kind : {FactorKind::classical, FactorKind::canonical}) {
            const std::complex<double> lhs = automorphy_factor(kind, c, Z, sum, v);
            const std::complex<double> rhs =
                automorphy_factor(kind, c, Z, lam, mu.value(Z) + v) *
                automorphy_factor(kind, c, Z, mu, v);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + 1e-12);
        }
    }
}

TEST_CASE("functional equation for the classical factor") {
    Rng rng(13);
    const auto types = accept::divisor_chains(2, 4);
    ThetaOptions opt;
    opt.eps = 1e-10;
    for (int t = 0; t < 30; ++t) {
        const auto& diag = types[rng.uniform_int(0, static_cast<std::int64_t>(types.size()) - 1)];
        const PolarizationType D = validate_polarization(diag);
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        Eigen::VectorXi n1(2), n2(2);
        for (int i = 0; i < 2; ++i) {
            n1[i] = static_cast<int>(rng.uniform_int(-2, 2));
            n2[i] = static_cast<int>(D.diag[i] * rng.uniform_int(-1, 1));
        }
        const LatticeVector lam = make_lattice_vector(n1, n2, D);
        const CVec v = accept::random_point(rng, 2, 0.5);
        const std::complex<double> lhs = theta_char(c, v + lam.value(Z), Z, opt).value;
        const std::complex<double> rhs =
            automorphy_factor(FactorKind::classical, c, Z, lam, v) * theta_char(c, v, Z, opt).value;
        CHECK(std::abs(lhs - rhs) < 5e-9 * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("canonical theta_0 satisfies the canonical functional equation") {
    Rng rng(14);
    const PolarizationType D = validate_polarization({2});
    ThetaOptions opt;
    for (int t = 0; t < 15; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        Eigen::VectorXi n1(1), n2(1);
        n1 << static_cast<int>(rng.uniform_int(-1, 1));
        n2 << static_cast<int>(2 * rng.uniform_int(-1, 1));
        const LatticeVector lam = make_lattice_vector(n1, n2, D);
        const CVec v = accept::random_point(rng, 1, 0.4);
        const std::complex<double> lhs = canonical_theta_base(c, v + lam.value(Z), Z, opt);
        const std::complex<double> rhs =
            automorphy_factor(FactorKind::canonical, c, Z, lam, v) *
            canonical_theta_base(c, v, Z, opt);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("evenness at characteristic zero") {
    Rng rng(15);
    ThetaOptions opt;
    const PolarizationType D = validate_polarization({1, 2});
    for (int t = 0; t < 20; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const CVec v = accept::random_point(rng, 2, 0.6);
        const std::complex<double> a = theta_char(Characteristic::zero(2), v, Z, opt).value;
        const std::complex<double> b = theta_char(Characteristic::zero(2), -v, Z, opt).value;
        CHECK(std::abs(a - b) < 10 * opt.eps * (1.0 + std::abs(a)));
    }
}

TEST_CASE("quasi-periodicity 5a: series route equals translate route") {
    Rng rng(16);
    const PolarizationType D = validate_polarization({2});
    ThetaOptions opt;
    for (int t = 0; t < 15; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        RVec w1(1);
        w1[0] = static_cast<double>(rng.uniform_int(-3, 3)) / 2.0;  // D^{-1} Z^g
        const CVec v = accept::random_point(rng, 1, 0.4);
        const std::complex<double> via_series = canonical_theta(c, w1, v, Z, opt);
        const std::complex<double> via_translate =
            canonical_theta_translate(c, w1, RVec::Zero(1), v, Z, opt);
        CHECK(std::abs(via_series - via_translate) <=
              1e-7 * std::max({std::abs(via_series), std::abs(via_translate), 1e-12}));
    }
}

TEST_CASE("canonical theta at w = 0, c = 0, v = 0 reduces to the series") {
    const PeriodMatrix Z = pm1(I, 2);
    const std::complex<double> a =
        canonical_theta(Characteristic::zero(1), RVec::Zero(1), CVec::Zero(1), Z);
    const std::complex<double> b = theta_char(Characteristic::zero(1), CVec::Zero(1), Z).value;
    CHECK(std::abs(a - b) < 1e-12);  // B(0,0) = 0 and the c-phase is 1
}

TEST_CASE("membership gate for canonical theta") {
    const PeriodMatrix Z = pm1(I, 2);
    RVec w1(1);
    w1[0] = 0.3;  // not in (1/2) Z
    CHECK_THROWS_AS(canonical_theta(Characteristic::zero(1), w1, CVec::Zero(1), Z),
                    MembershipError);
}

TEST_CASE("quasi-periodicity 5c: integral shifts do not move theta^c_w") {
    Rng rng(17);
    const PolarizationType D = validate_polarization({2});
    ThetaOptions opt;
    for (int t = 0; t < 10; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        RVec w1(1), w2(1);
        w1[0] = static_cast<double>(rng.uniform_int(-2, 2)) / 2.0;
        w2[0] = static_cast<double>(rng.uniform_int(-2, 2));
        const CVec v = accept::random_point(rng, 1, 0.3);
        const std::complex<double> a = canonical_theta_translate(c, w1, w2, v, Z, opt);
        const std::complex<double> b = canonical_theta_translate(c, w1, RVec::Zero(1), v, Z, opt);
        CHECK(std::abs(a - b) <= 1e-7 * std::max({std::abs(a), std::abs(b), 1e-12}));
    }
}

TEST_CASE("quasi-periodicity 5b: characteristic shift of theta^c_0") {
    Rng rng(18);
    const PolarizationType D = validate_polarization({2});
    const std::complex<double> pi_i(0, std::numbers::pi);
    ThetaOptions opt;
    for (int t = 0; t < 10; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        RVec w1(1), w2(1);
        w1[0] = static_cast<double>(rng.uniform_int(-2, 2)) / 2.0;
        w2[0] = static_cast<double>(rng.uniform_int(-2, 2));
        const CVec v = accept::random_point(rng, 1, 0.3);
        Characteristic cw{c.c1 + w1, c.c2 + w2};
        const std::complex<double> lhs = canonical_theta_base(cw, v, Z, opt);
        const std::complex<double> phase =
            std::exp(-pi_i * w1.dot(c.c2) + pi_i * c.c1.dot(w2) + pi_i * w1.dot(w2));
        const std::complex<double> rhs =
            phase * canonical_theta_translate(c, w1, w2, v, Z, opt);
        CHECK(std::abs(lhs - rhs) <= 1e-7 * std::max({std::abs(lhs), std::abs(rhs), 1e-12}));
    }
}

TEST_CASE("quasi-periodicity 5d: phase between shifted characteristics") {
    Rng rng(19);
    const PolarizationType D = validate_polarization({2});
    const std::complex<double> two_pi_i(0, 2.0 * std::numbers::pi);
    ThetaOptions opt;
    for (int t = 0; t < 10; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        RVec w1(1), w2(1);
        w1[0] = static_cast<double>(rng.uniform_int(-4, 4)) / 2.0;
        w2[0] = static_cast<double>(rng.uniform_int(-2, 2));
        const CVec v = accept::random_point(rng, 1, 0.3);
        Characteristic lhs_c{c.c1 + w1, c.c2 + w2};
        Characteristic rhs_c{c.c1 + w1, c.c2};
        const std::complex<double> lhs = theta_char(lhs_c, v, Z, opt).value;
        const std::complex<double> phase = std::exp(two_pi_i * (c.c1.dot(w2) + w1.dot(w2)));
        const std::complex<double> rhs = phase * theta_char(rhs_c, v, Z, opt).value;
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max({std::abs(lhs), std::abs(rhs), 1e-12}));
    }
}

TEST_CASE("theta basis layout") {
    {
        const PeriodMatrix Z = pm1(I);
        const ThetaBasis b = theta_basis(Characteristic::zero(1), Z, CVec::Zero(1));
        REQUIRE(b.values.size() == 1);
        CHECK(std::abs(b.values[0] - 1.086434811213308) < 1e-9);
    }
    {
        const PeriodMatrix Z = pm1(I, 2);
        const ThetaBasis b = theta_basis(Characteristic::zero(1), Z, CVec::Zero(1));
        REQUIRE(b.values.size() == 2);
        CHECK(std::abs(b.values[0] - 1.086434811213308) < 1e-9);
        CHECK(std::abs(b.values[1] - 0.913579138156117) < 1e-9);
    }
    {
        CMat Z2(2, 2);
        Z2 << I, 0.0, 0.0, 1.5 * I;
        const PeriodMatrix Z =
            validate_period_matrix(Z2, validate_polarization({1, 2}));
        const ThetaBasis b = theta_basis(Characteristic::zero(2), Z, CVec::Zero(2));
        CHECK(b.values.size() == 2);
    }
}

TEST_CASE("oracle equivalence against the naive summation") {
    Rng rng(20);
    ThetaOptions opt;
    opt.eps = 1e-10;
    const auto pool = accept::divisor_chains(2, 4);
    for (int t = 0; t < 25; ++t) {
        const auto& diag = pool[rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1)];
        const PolarizationType D = validate_polarization(diag);
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const Characteristic c = accept::random_half_characteristic(rng, D);
        const CVec v = accept::random_point(rng, 2, 1.0);
        const std::complex<double> fast = theta_char(c, v, Z, opt).value;
        const std::complex<double> slow = accept::naive_theta(c, v, Z, opt.eps, 5);
        CHECK(std::abs(fast - slow) <= opt.eps * (1.0 + std::abs(slow)));
    }
}

TEST_CASE("argument reduction") {
    Rng rng(21);
    const PolarizationType D = validate_polarization({1, 2});
    for (int t = 0; t < 20; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const CVec v = accept::random_point(rng, 2, 3.0);
        const ReducedArgument red = reduce_argument(Z, v);
        const CVec rec = red.v0 + red.lam.value(Z);
        CHECK((rec - v).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + v.cwiseAbs().maxCoeff()));
        const Decomposition d = decompose_vector(Z, red.v0);
        CHECK(d.v1.cwiseAbs().maxCoeff() <= 0.5 + 1e-9);
    }
}

TEST_CASE("extended precision path agrees with double") {
    const PeriodMatrix Z = pm1(I);
    ThetaOptions fast, ext;
    ext.extended = true;
    const std::complex<double> a = theta_char(Characteristic::zero(1), CVec::Zero(1), Z, fast).value;
    const std::complex<double> b = theta_char(Characteristic::zero(1), CVec::Zero(1), Z, ext).value;
    CHECK(std::abs(a - b) < 1e-13);
}
