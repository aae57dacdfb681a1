#pragma once

#include <string>
#include <vector>

#include "abeltheta/transform.hpp"

namespace abeltheta {

// Synthetic base cover of an abelian fibration: abstract chart labels, a
// 1-parameter affine period path on chart 0, and gluing matrices.  Charts
// other than 0 get their period maps by pushing the path through the
// overlap graph.
struct Overlap {
    int a = 0;
    int b = 0;
    SymplecticElement M;  // Z^b(s) = M(Z^a(s))
};

struct CoverSpec {
    PolarizationType D;
    std::vector<std::string> charts;
    std::vector<Overlap> overlaps;
    CMat Z0, Z1;     // endpoints of the affine path on chart 0
    int samples = 5;
    Characteristic c;  // characteristic on chart 0
};

// Validates endpoints, path membership in h_g at every sample, triple
// consistency M^{ac} = M^{bc} M^{ab} (exactly) for redundant overlaps, and
// connectivity.  Returns per-chart transforms M^{0a}.
struct ResolvedCover {
    CoverSpec spec;
    std::vector<SymplecticElement> from_base;  // M^{0a} per chart
    std::vector<PeriodMatrix> base_path;       // Z^0(s) at the samples
};
ResolvedCover resolve_cover(const CoverSpec& spec);

PeriodMatrix chart_period(const ResolvedCover& cover, int chart, int sample);
Characteristic chart_characteristic(const ResolvedCover& cover, int chart);

// Transition function of det f_* L across one overlap at one base point:
//   det Ctilde = kappa^{-d} / det C,
// computed from the numerically extracted C, never from the asserted
// root-of-unity form.  |det Ctilde| = |det(gamma Z + delta)|^{d/2}.
std::complex<double> transition_det_push(const SymplecticElement& M, const PeriodMatrix& Z,
                                         const Characteristic& c,
                                         const TransformOptions& opt = {});

// Transition function of s^* omega: det(gamma Z + delta)^{-1}.
std::complex<double> transition_hodge(const SymplecticElement& M, const PeriodMatrix& Z);

enum class TorsionMode { A, A_exceptional, B, B_exceptional };

const char* torsion_mode_name(TorsionMode mode);

// The power combination asserted trivial by the torsion relations:
//   A:  g_L^8  g_mu^{4d}      A_exceptional: g_L^24 g_mu^{12d}
//   B:  g_L    g_mu^{d/2}     B_exceptional: g_L^3  g_mu^{3d/2}
struct TorsionRow {
    int overlap = 0;
    int sample = 0;
    std::complex<double> combination;
    double residual = 0.0;  // |combination - 1|
};

struct TorsionReport {
    TorsionMode mode{};
    double max_residual = 0.0;
    bool pass = false;
    double tolerance = 1e-6;
    std::vector<TorsionRow> rows;
};

TorsionReport verify_torsion(const CoverSpec& spec, TorsionMode mode,
                             const TransformOptions& opt = {}, double tolerance = 1e-6);

// a(n) = n^{g+1} b / (g+1)! - n^g / 2 with b = (g+1)!/2, in exact rationals;
// throws IdentityError unless it equals n^g (n-1)/2.
Rat pushforward_coefficient(int g, int n);

// Convenience builder for tests and the CLI: two charts glued by M.
CoverSpec make_two_chart_cover(const PolarizationType& D, const SymplecticElement& M,
                               const CMat& Z0, const CMat& Z1, int samples,
                               const Characteristic& c);

} // namespace abeltheta
