#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abeltheta/symplectic.hpp"
#include "support.hpp"

using namespace abeltheta;

namespace {

const std::complex<double> I(0, 1);

IMat imat2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    IMat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

} // namespace

TEST_CASE("gamma membership") {
    const PolarizationType D = validate_polarization({2, 4});
    CHECK_NOTHROW(gamma_membership(IMat::identity(4), D));

    // J = (0 -I; I 0) is a member for every type
    for (auto diag : {std::vector<std::int64_t>{1}, {3}, {2, 4}, {2, 2, 6}}) {
        const PolarizationType Dx = validate_polarization(diag);
        const int g = Dx.g();
        IMat J(2 * g, 2 * g);
        for (int i = 0; i < g; ++i) {
            J(i, g + i) = -1;
            J(g + i, i) = 1;
        }
        CHECK_NOTHROW(gamma_membership(J, Dx));
    }

    const PolarizationType D1 = validate_polarization({1});
    CHECK_THROWS_AS(gamma_membership(imat2(1, 1, 1, 1), D1), NotSymplecticError);
}

TEST_CASE("to_gd / from_gd block formulas") {
    {
        const PolarizationType D = validate_polarization({1});
        const SymplecticElement M = to_gd(gamma_membership(IMat::identity(2), D));
        CHECK(M.alpha(0, 0) == 1);
        CHECK(M.integral);
    }
    {
        // g=1, D=(2), R = J -> M = [[0, -2], [1/2, 0]]
        const PolarizationType D = validate_polarization({2});
        const SymplecticElement M = to_gd(gamma_membership(imat2(0, -1, 1, 0), D));
        CHECK(M.beta(0, 0) == Rat(-2));
        CHECK(M.gamma(0, 0) == Rat(1, 2));
        CHECK(M.alpha(0, 0) == 0);
        CHECK(M.delta(0, 0) == 0);
        CHECK_FALSE(M.integral);
        const GammaDElement back = from_gd(M);
        CHECK(back.R == imat2(0, -1, 1, 0));
    }
}

TEST_CASE("round trip and group closure on random words") {
    Rng rng(31);
    for (auto diag : {std::vector<std::int64_t>{1}, {2}, {1, 2}, {2, 4}}) {
        const PolarizationType D = validate_polarization(diag);
        for (int t = 0; t < 25; ++t) {
            const SymplecticElement M = random_gd_element(rng, D, 8);
            CHECK(is_gamma_member(M.R, D));
            const GammaDElement back = from_gd(M);
            CHECK(back.R == M.R);
            // closure and inverse stay inside Gamma_D
            const SymplecticElement M2 = random_gd_element(rng, D, 4);
            CHECK(is_gamma_member(gamma_mul(GammaDElement{D, M.R}, GammaDElement{D, M2.R}).R, D));
            const GammaDElement inv = gamma_inverse(GammaDElement{D, M.R});
            CHECK(is_gamma_member(inv.R, D));
            CHECK(gamma_mul(GammaDElement{D, M.R}, inv).R == IMat::identity(2 * D.g()));
            // M J1 ^tM = J1 over the rationals
            const QMat Mm = M.matrix();
            QMat J1(2 * D.g(), 2 * D.g());
            for (int i = 0; i < D.g(); ++i) {
                J1(i, D.g() + i) = 1;
                J1(D.g() + i, i) = -1;
            }
            CHECK(Mm * J1 * Mm.transpose() == J1);
        }
    }
}

TEST_CASE("act_on_siegel examples") {
    const PolarizationType D = validate_polarization({1});
    const SymplecticElement J = generators(D)[0];

    CMat Zi(1, 1);
    Zi(0, 0) = I;
    const PeriodMatrix Z = validate_period_matrix(Zi, D);
    CHECK(std::abs(act_on_siegel(gd_identity(D), Z).Z(0, 0) - I) < 1e-14);
    // i is the fixed point of the inversion
    CHECK(std::abs(act_on_siegel(J, Z).Z(0, 0) - I) < 1e-12);

    CMat Z2(1, 1);
    Z2(0, 0) = 2.0 * I;
    const PeriodMatrix Zb = validate_period_matrix(Z2, D);
    ActionVariant used;
    const PeriodMatrix Zp = act_on_siegel(J, Zb, &used);
    CHECK(std::abs(Zp.Z(0, 0) - 0.5 * I) < 1e-12);
}

TEST_CASE("action lands in the Siegel space on random draws") {
    Rng rng(32);
    for (auto diag : {std::vector<std::int64_t>{1}, {2}, {1, 2}, {2, 4}, {2, 2, 2}}) {
        const PolarizationType D = validate_polarization(diag);
        for (int t = 0; t < 40; ++t) {
            const PeriodMatrix Z = accept::random_siegel(rng, D);
            const SymplecticElement M = random_gd_element(rng, D, 6);
            CHECK_NOTHROW(act_on_siegel(M, Z));
        }
    }
}

TEST_CASE("analytic representation composes") {
    Rng rng(33);
    const PolarizationType D = validate_polarization({1, 2});

    const SymplecticElement id = gd_identity(D);
    const PeriodMatrix Z0 = accept::random_siegel(rng, D);
    CHECK((analytic_rep(id, Z0) - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    for (int t = 0; t < 20; ++t) {
        const PeriodMatrix Z = accept::random_siegel(rng, D);
        const SymplecticElement M1 = random_gd_element(rng, D, 5);
        const SymplecticElement M2 = random_gd_element(rng, D, 5);
        const CMat lhs = analytic_rep(gd_mul(M1, M2), Z);
        const CMat rhs = analytic_rep(M1, act_on_siegel(M2, Z)) * analytic_rep(M2, Z);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff()));
        // determinant cocycle
        const std::complex<double> dl =
            cocycle_matrix(gd_mul(M1, M2), Z).partialPivLu().determinant();
        const std::complex<double> dr =
            cocycle_matrix(M1, act_on_siegel(M2, Z)).partialPivLu().determinant() *
            cocycle_matrix(M2, Z).partialPivLu().determinant();
        CHECK(std::abs(dl - dr) < 1e-9 * std::abs(dr));
    }
}

TEST_CASE("gamma = 0 analytic representation is constant in Z") {
    const PolarizationType D = validate_polarization({2});
    IMat R = IMat::identity(2);
    R(0, 1) = 1;  // upper triangular member
    const SymplecticElement M = to_gd(gamma_membership(R, D));
    Rng rng(34);
    const CMat a = analytic_rep(M, accept::random_siegel(rng, D));
    const CMat b = analytic_rep(M, accept::random_siegel(rng, D));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("characteristic transformation") {
    Rng rng(35);
    {
        const PolarizationType D = validate_polarization({1, 2});
        const Characteristic c = accept::random_half_characteristic(rng, D);
        const Characteristic mc = transform_characteristic(gd_identity(D), c);
        CHECK((mc.c1 - c.c1).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((mc.c2 - c.c2).cwiseAbs().maxCoeff() < 1e-14);
    }
    {
        // J-type: M[c]^1 = -D^{-1} c^2, M[c]^2 = D c^1
        const PolarizationType D = validate_polarization({2, 4});
        const SymplecticElement J = generators(D)[0];
        const Characteristic c = accept::random_half_characteristic(rng, D);
        const Characteristic mc = transform_characteristic(J, c);
        CHECK((mc.c1 + D.inverse_matrix() * c.c2).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((mc.c2 - D.matrix() * c.c1).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (auto diag : {std::vector<std::int64_t>{2}, {1, 2}, {2, 4}}) {
        const PolarizationType D = validate_polarization(diag);
        for (int t = 0; t < 25; ++t) {
            const Characteristic c = accept::random_half_characteristic(rng, D);
            const SymplecticElement M = random_gd_element(rng, D, 6);
            CHECK(transform_characteristic(M, c).is_half(D));
        }
    }
}

TEST_CASE("from_gd rejects non-integral sources") {
    const PolarizationType D = validate_polarization({2});
    SymplecticElement M = gd_identity(D);
    M.gamma(0, 0) = Rat(1, 3);  // D gamma = 2/3 is not integral
    CHECK_THROWS_AS(from_gd(M), NonIntegralError);
}

TEST_CASE("J applied twice equals the action of J^2 modulo Lambda(H)") {
    Rng rng(38);
    for (auto diag : {std::vector<std::int64_t>{2}, {2, 4}}) {
        const PolarizationType D = validate_polarization(diag);
        const SymplecticElement J = generators(D)[0];
        const SymplecticElement J2 = gd_mul(J, J);
        for (int t = 0; t < 20; ++t) {
            const Characteristic c = accept::random_half_characteristic(rng, D);
            const Characteristic twice = transform_characteristic(J, transform_characteristic(J, c));
            const Characteristic direct = transform_characteristic(J2, c);
            // difference lies in Lambda(H): D (c1 - c1') and (c2 - c2') integral
            CHECK(nearly_integral(RVec(D.matrix() * (twice.c1 - direct.c1))));
            CHECK(nearly_integral(RVec(twice.c2 - direct.c2)));
        }
    }
}

TEST_CASE("generator family") {
    for (auto diag : {std::vector<std::int64_t>{1}, {3}, {1, 2}, {2, 4}, {2, 2, 6}}) {
        const PolarizationType D = validate_polarization(diag);
        const auto gens = generators(D);
        CHECK(gens.size() >= 3);
        for (const auto& M : gens) CHECK(is_gamma_member(M.R, D));
        // (0 -D; D^{-1} 0)^2 = -I
        const SymplecticElement J2 = gd_mul(gens[0], gens[0]);
        QMat expect = -QMat::identity(2 * D.g());
        CHECK(J2.matrix() == expect);
    }
    // D = (1): the classical Sp_2(Z) generators appear
    const auto gens1 = generators(validate_polarization({1}));
    bool has_J = false, has_T = false;
    for (const auto& M : gens1) {
        if (M.R == imat2(0, -1, 1, 0)) has_J = true;
        if (M.R == imat2(1, 1, 0, 1)) has_T = true;
    }
    CHECK(has_J);
    CHECK(has_T);
}

TEST_CASE("Sp(D) projection") {
    const PolarizationType D = validate_polarization({2, 4});
    const GammaDElement id{D, IMat::identity(4)};
    const SpDElement pid = spd_projection(id);
    CHECK(pid.residues == IMat::identity(4));

    // I + Dbar E_{01} projects to the identity (kernel element)
    IMat K = IMat::identity(4);
    K(0, 1) = 2;  // dbar_0 = 2
    if (is_gamma_member(K, D)) {
        const GammaDElement k{D, K};
        CHECK(in_gamma_d_kernel(k));
    }

    Rng rng(36);
    for (int t = 0; t < 50; ++t) {
        const SymplecticElement A = random_gd_element(rng, D, 5);
        const SymplecticElement B = random_gd_element(rng, D, 5);
        const SpDElement pa = spd_projection(GammaDElement{D, A.R});
        const SpDElement pb = spd_projection(GammaDElement{D, B.R});
        const SpDElement pab = spd_projection(gamma_mul(GammaDElement{D, A.R}, GammaDElement{D, B.R}));
        CHECK(spd_mul(pa, pb).residues == pab.residues);
        CHECK(spd_preserves_pairing(pa));
    }
}

TEST_CASE("kernel characterization of Gamma_D(D)") {
    const PolarizationType D = validate_polarization({2});
    // I + Dbar A for a symplectic choice: upper elementary with entry 2
    IMat R = IMat::identity(2);
    R(0, 1) = 2;
    const GammaDElement e = gamma_membership(R, D);
    CHECK(in_gamma_d_kernel(e));
    const SpDElement p = spd_projection(e);
    CHECK(p.residues == IMat::identity(2));

    IMat R2 = IMat::identity(2);
    R2(0, 1) = 1;
    CHECK_FALSE(in_gamma_d_kernel(gamma_membership(R2, D)));
}

TEST_CASE("decompose_into_generators") {
    const PolarizationType D = validate_polarization({2});
    const auto gens = generators(D);

    {
        const DecomposeResult r =
            decompose_into_generators(GammaDElement{D, IMat::identity(2)}, 1000);
        CHECK(r.found);
        CHECK(r.word.empty());
    }
    {
        // product of three known generators is recovered with a short word
        const SymplecticElement target =
            gd_mul(gens[0], gd_mul(gens[1 % gens.size()], gens[2 % gens.size()]));
        const DecomposeResult r =
            decompose_into_generators(GammaDElement{D, target.R}, 200000);
        REQUIRE(r.found);
        CHECK(r.word.size() <= 6);
        CHECK(word_to_element(D, r.word).R == target.R);
    }
    {
        // budget exhaustion is a NotFound, not an error
        Rng rng(37);
        SymplecticElement big = gd_identity(D);
        for (int k = 0; k < 12; ++k) big = gd_mul(big, random_gd_element(rng, D, 1));
        const DecomposeResult r = decompose_into_generators(GammaDElement{D, big.R}, 2);
        CHECK_FALSE(r.found);
    }
}
