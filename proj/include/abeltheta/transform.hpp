#pragma once

#include <complex>
#include <optional>

#include "abeltheta/rng.hpp"
#include "abeltheta/symplectic.hpp"
#include "abeltheta/theta.hpp"

namespace abeltheta {

// h_psi(v) = exp(pi i ^t v (gamma Z + delta)^{-1} gamma v).
std::complex<double> h_psi(const SymplecticElement& M, const PeriodMatrix& Z, const CVec& v);

struct TransformOptions {
    double eps = 1e-10;
    int nsamples = 0;          // 0 -> d + 4
    std::uint64_t seed = Rng::default_seed;
    int max_order = 24;        // root-of-unity search bound (<= 48)
    double order_tol = 1e-5;
    bool force_extended = false;  // extended precision is automatic for d > 12
    // Reject extractions whose estimated entrywise error exceeds this.  The
    // estimate is the fit residual amplified by the spread of basis-column
    // scales, which the raw residual alone does not see.
    double entry_error_cap = 1e-6;
    ActionVariant* variant_out = nullptr;
};

// Numerical extraction of the change-of-basis matrix in
//   psi^* B^Z = C B^{Z'},   C = det(gamma Z + delta)^{-1/2} C_M.
// The classical form of the relation (with the h_psi twist and the
// characteristic phase pulled out) is sampled at nsamples points v' in the
// half box (1/2)([0,1)^g + Z'[0,1)^g), v = ^t(gamma Z + delta) v', and C is
// recovered column by column in least squares.  Arguments on the left are
// reduced modulo the lattice first so only moderate exponents are ever
// taken.
struct TransformationResult {
    CMat C;
    CMat C_M;  // det(gamma Z + delta)^{1/2} C, principal branch
    std::complex<double> detCM;
    std::optional<int> order;
    double conditioning = 0.0;  // relative least-squares residual
    double entry_error = 0.0;   // estimated worst-case error of C entries
    ActionVariant variant = ActionVariant::plain;
};

TransformationResult transformation_matrix(const SymplecticElement& M, const PeriodMatrix& Z,
                                           const Characteristic& c,
                                           const TransformOptions& opt = {});

// Explicit C_M of the generator (0 -D; D^{-1} 0):
//   (C_M)_{mn} = (d / i^g)^{-1/2} exp(2 pi i ^t m D^{-1} n).
CMat cm_fourier_generator(const PolarizationType& D);

// A = (exp(2 pi i ^t m D^{-1} n))_{m,n in Z_D}; det A = zeta_4 d^{d/2}.
struct DftResult {
    std::complex<double> det;
    std::complex<double> zeta4;
};
DftResult dft_determinant(const PolarizationType& D, std::int64_t cap = 64);

// Independent route: det A = prod_i det(C_i)^{d/d_i} over the cyclic factors.
std::complex<double> dft_determinant_tensor_oracle(const PolarizationType& D);

// Sign of m -> Delta m mod D on Z_D for integral M; NotBijectiveError if the
// induced map fails to be a permutation.
int permutation_sign_delta(const SymplecticElement& M, std::int64_t cap = 64);

// Smallest n <= max_order with |z^n - 1| < tol (and |z| on the unit circle),
// or nullopt.
std::optional<int> root_of_unity_order(std::complex<double> z, int max_order, double tol);

enum class BundleMode { symmetric, totally_symmetric };

// The 3|d_g and gcd(3, d_{g-1}) = 1 escape hatch, with d_0 := 1 when g = 1.
bool exceptional_type(const PolarizationType& D);

struct Classification {
    std::complex<double> detCM;
    std::optional<int> order;
    double conditioning = 0.0;
    int order_bound = 0;  // 8 / 24 (symmetric), 1 / 3 (totally symmetric)
};

// Runs transformation_matrix and checks det C_M against the asserted
// root-of-unity group; ClassificationError carries the measured value.
Classification classify(const SymplecticElement& M, const PeriodMatrix& Z,
                        const Characteristic& c, BundleMode mode,
                        const TransformOptions& opt = {});

} // namespace abeltheta
