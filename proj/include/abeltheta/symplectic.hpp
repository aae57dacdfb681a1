#pragma once

#include <optional>
#include <vector>

#include "abeltheta/exact.hpp"
#include "abeltheta/rng.hpp"
#include "abeltheta/types.hpp"

namespace abeltheta {

// J_D = [[0, D], [-D, 0]], the type-D symplectic form on Z^{2g}.
IMat type_form_matrix(const PolarizationType& D);

// Element of Gamma_D = { R integer : R J_D ^tR = J_D }.
struct GammaDElement {
    PolarizationType D;
    IMat R;

    int g() const { return D.g(); }
    IMat blockA() const { return R.block(0, 0, g(), g()); }
    IMat blockB() const { return R.block(0, g(), g(), g()); }
    IMat blockGamma() const { return R.block(g(), 0, g(), g()); }
    IMat blockDelta() const { return R.block(g(), g(), g(), g()); }
};

// Exact membership test; throws NotSymplecticError with the residual.
GammaDElement gamma_membership(const IMat& R, const PolarizationType& D);
bool is_gamma_member(const IMat& R, const PolarizationType& D);

GammaDElement gamma_mul(const GammaDElement& a, const GammaDElement& b);
// Inverse through the J_D-adjugate: R^{-1} = J_D ^tR J_D^{-1}.
GammaDElement gamma_inverse(const GammaDElement& a);

// Element of G_D = diag(I,D)^{-1} Gamma_D diag(I,D), kept as exact rational
// blocks together with its integral source.
struct SymplecticElement {
    PolarizationType D;
    QMat alpha, beta, gamma, delta;
    IMat R;         // source in Gamma_D
    bool integral = false;  // member of G_D^int

    int g() const { return D.g(); }
    QMat matrix() const;
};

SymplecticElement to_gd(const GammaDElement& R);
// Recomputes the Gamma_D source from the blocks; throws NonIntegralError.
GammaDElement from_gd(const SymplecticElement& M);

SymplecticElement gd_mul(const SymplecticElement& a, const SymplecticElement& b);
SymplecticElement gd_inverse(const SymplecticElement& a);
SymplecticElement gd_identity(const PolarizationType& D);

// gamma Z + delta as a complex matrix.
CMat cocycle_matrix(const SymplecticElement& M, const PeriodMatrix& Z);

// phi(M)_a = ^t(gamma Z + delta)^{-1}.
CMat analytic_rep(const SymplecticElement& M, const PeriodMatrix& Z);

// Z' = M(Z).  Both textual variants of the formula are tried and the one
// satisfying the lattice identity
//   ^t(gamma Z+delta)^{-1} j_Z(n) = j_{Z'}(^tM^{-1} n)
// on the 2g generators of Lambda_D is returned; `used` reports the choice.
enum class ActionVariant { plain, scaled_beta };
PeriodMatrix act_on_siegel(const SymplecticElement& M, const PeriodMatrix& Z,
                           ActionVariant* used = nullptr);

// ^tM^{-1} as an exact rational matrix (the rational representation).
QMat rational_rep(const SymplecticElement& M);

// M[c]^1 = delta c1 - gamma c2 + (1/2)(D gamma ^t delta)_0,
// M[c]^2 = -beta c1 + alpha c2 + (1/2)(alpha ^t beta)_0.
Characteristic transform_characteristic(const SymplecticElement& M, const Characteristic& c);

// The distinguished generator (0 -D; D^{-1} 0) followed by a family of
// Gamma_D^int elements (upper/lower elementary and GL-type), every one
// verified through gamma_membership.
std::vector<SymplecticElement> generators(const PolarizationType& D);

// Action of Gamma_D on K(D) ~ Z_D + Z_D: residues of Dbar ^tR Dbar^{-1},
// entry (i,j) reduced mod dbar_i.
struct SpDElement {
    PolarizationType D;
    IMat residues;  // 2g x 2g, entry (i,j) in [0, dbar_i)
};

SpDElement spd_projection(const GammaDElement& R);
SpDElement spd_mul(const SpDElement& a, const SpDElement& b);
// Kernel test: R in Gamma_D(D) iff R = I + Dbar A entrywise.
bool in_gamma_d_kernel(const GammaDElement& R);
// Exact check that the induced map preserves e^D on the standard generators.
bool spd_preserves_pairing(const SpDElement& s);

struct DecomposeResult {
    bool found = false;
    // Word over generators(D): index k means generators()[k], ~k (i.e.
    // -k-1) its inverse.  Product left to right equals R exactly.
    std::vector<int> word;
    std::size_t states = 0;
};

// Bounded bidirectional search over generator words with hashed matrix
// states.  NotFound (found=false) after the budget, never an error.
DecomposeResult decompose_into_generators(const GammaDElement& R, std::size_t budget);

SymplecticElement word_to_element(const PolarizationType& D, const std::vector<int>& word);

// Random word of length <= max_len in generators(D) and their inverses;
// integral_only restricts to the Gamma_D^int family (G_D^int draws).
SymplecticElement random_gd_element(Rng& rng, const PolarizationType& D, int max_len,
                                    bool integral_only = false);

} // namespace abeltheta
