#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "abeltheta/errors.hpp"

namespace abeltheta {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Tolerances {
    double sym = 1e-9;  // relative symmetry tolerance for period matrices
    double lin = 1e-9;  // residual tolerance for linear solves
};

inline Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

// Polarization type D = (d_1,...,d_g) with d_1 | d_2 | ... | d_g.
struct PolarizationType {
    std::vector<std::int64_t> diag;
    std::int64_t d = 1;  // product of the d_i

    int g() const { return static_cast<int>(diag.size()); }

    // Z_D = Z_{d_1} + ... + Z_{d_g}, enumerated lexicographically with the
    // last coordinate fastest.  This order is shared by every module.
    std::vector<std::int64_t> element(std::int64_t index) const;
    std::int64_t index_of(const std::vector<std::int64_t>& m) const;

    RVec diag_vec() const;
    RMat matrix() const;          // diag(d_1..d_g)
    RMat inverse_matrix() const;  // diag(1/d_1..1/d_g)
};

PolarizationType validate_polarization(const std::vector<std::int64_t>& diag);

// Z in the Siegel upper half space, paired with the polarization type that
// fixes the lattice (Z, D) Z^{2g}.
struct PeriodMatrix {
    CMat Z;
    PolarizationType D;

    int g() const { return static_cast<int>(Z.rows()); }
    RMat imag() const { return Z.imag(); }
};

PeriodMatrix validate_period_matrix(const CMat& Z, const PolarizationType& D);

// Characteristic c = Z c1 + c2 of a line bundle in Pic^H.
struct Characteristic {
    RVec c1;
    RVec c2;

    static Characteristic zero(int g);
    CVec value(const PeriodMatrix& Z) const { return Z.Z * c1 + c2; }
    bool is_zero(double tol = 1e-12) const;
    // c in (1/2) Lambda(H)  <=>  2 D c1 and 2 c2 integral.
    bool is_half(const PolarizationType& D, double tol = 1e-9) const;
};

// Lattice vector lambda = Z n1 + n2 with n1 in Z^g, n2 in D Z^g.
struct LatticeVector {
    Eigen::VectorXi n1;
    Eigen::VectorXi n2;  // entries constrained to n2_i = 0 mod d_i

    CVec value(const PeriodMatrix& Z) const;
};

LatticeVector make_lattice_vector(const Eigen::VectorXi& n1, const Eigen::VectorXi& n2,
                                  const PolarizationType& D);

// Unique splitting v = Z v1 + v2 with v1, v2 real (solves the 2g x 2g real
// system built from real and imaginary parts).
struct Decomposition {
    RVec v1;
    RVec v2;
};
Decomposition decompose_vector(const PeriodMatrix& Z, const CVec& v);

// The pairings attached to H_Z:
//   H(v,w) = ^t v (Im Z)^{-1} conj(w)      hermitian
//   B(v,w) = ^t v (Im Z)^{-1} w            symmetric C-bilinear
//   (H-B)(v,w) = -2i ^t v w^1
//   E(v,w) = ^t v^1 w^2 - ^t v^2 w^1       alternating, real
struct FormValues {
    std::complex<double> H;
    std::complex<double> B;
    std::complex<double> HmB;
    double E;
};
FormValues forms(const PeriodMatrix& Z, const CVec& v, const CVec& w);

// Recover Z from a symplectic basis: the last g vectors are a C-basis and,
// after normalizing lambda_{g+i} -> d_i e_i, the first g become the columns
// of Z.  Equivalently Z = D L2^{-1} L1.
PeriodMatrix period_from_basis(const std::vector<CVec>& lambda, const PolarizationType& D);

// Columns of (Z, D): the canonical symplectic basis attached to Z.
std::vector<CVec> basis_from_period(const PeriodMatrix& Z);

bool nearly_integral(double x, double tol = 1e-9);
bool nearly_integral(const RVec& x, double tol = 1e-9);

} // namespace abeltheta
