#include "abeltheta/fibration.hpp"

#include <cmath>
#include <deque>

namespace abeltheta {

namespace {

std::complex<double> ipow(std::complex<double> z, std::int64_t e) {
    std::complex<double> p(1, 0);
    for (std::int64_t k = 0; k < e; ++k) p *= z;
    return p;
}

} // namespace

ResolvedCover resolve_cover(const CoverSpec& spec) {
    const int nc = static_cast<int>(spec.charts.size());
    if (nc == 0) throw Error("cover has no charts");
    if (spec.samples < 1) throw Error("cover needs at least one base sample");

    ResolvedCover out;
    out.spec = spec;

    // Base path samples, each validated in h_g.
    for (int s = 0; s < spec.samples; ++s) {
        const double t = spec.samples == 1 ? 0.5
                                           : static_cast<double>(s) /
                                                 static_cast<double>(spec.samples - 1);
        const CMat Zt = spec.Z0 + t * (spec.Z1 - spec.Z0);
        out.base_path.push_back(validate_period_matrix(Zt, spec.D));
    }

    // Spread M^{0a} over the overlap graph; verify redundant edges exactly.
    std::vector<bool> known(nc, false);
    out.from_base.assign(nc, gd_identity(spec.D));
    known[0] = true;
    std::deque<int> queue{0};
    std::vector<bool> used(spec.overlaps.size(), false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < spec.overlaps.size(); ++i) {
            const Overlap& o = spec.overlaps[i];
            if (o.a < 0 || o.a >= nc || o.b < 0 || o.b >= nc)
                throw Error("overlap references an unknown chart");
            if (known[o.a] && !known[o.b]) {
                out.from_base[o.b] = gd_mul(o.M, out.from_base[o.a]);
                known[o.b] = true;
                used[i] = true;
                progress = true;
            } else if (known[o.a] && known[o.b] && !used[i]) {
                // M^{0b} = M^{ab} M^{0a} must hold exactly.
                const SymplecticElement expect = gd_mul(o.M, out.from_base[o.a]);
                if (!(expect.R == out.from_base[o.b].R))
                    throw Error("inconsistent gluing data: M^{ac} != M^{bc} M^{ab}");
                used[i] = true;
                progress = true;
            }
        }
    }
    for (int a = 0; a < nc; ++a)
        if (!known[a]) throw Error("overlap graph does not connect chart " + spec.charts[a]);
    return out;
}

PeriodMatrix chart_period(const ResolvedCover& cover, int chart, int sample) {
    const PeriodMatrix& base = cover.base_path.at(sample);
    if (chart == 0) return base;
    return act_on_siegel(cover.from_base.at(chart), base);
}

Characteristic chart_characteristic(const ResolvedCover& cover, int chart) {
    if (chart == 0) return cover.spec.c;
    return transform_characteristic(cover.from_base.at(chart), cover.spec.c);
}

std::complex<double> transition_det_push(const SymplecticElement& M, const PeriodMatrix& Z,
                                         const Characteristic& c, const TransformOptions& opt) {
    const TransformationResult tr = transformation_matrix(M, Z, c, opt);
    const Characteristic Mc = transform_characteristic(M, c);
    const std::complex<double> phase = std::exp(
        std::complex<double>(0, std::numbers::pi) * (Mc.c1.dot(Mc.c2) - c.c1.dot(c.c2)));
    const std::complex<double> detC = tr.C.partialPivLu().determinant();
    const std::complex<double> value = ipow(phase, Z.D.d) / detC;

    const double detA = std::abs(cocycle_matrix(M, Z).partialPivLu().determinant());
    const double expected = std::pow(detA, static_cast<double>(Z.D.d) / 2.0);
    if (std::abs(std::abs(value) - expected) > 1e-6 * expected)
        throw IdentityError("|det Ctilde| deviates from |det(gamma Z + delta)|^{d/2}");
    return value;
}

std::complex<double> transition_hodge(const SymplecticElement& M, const PeriodMatrix& Z) {
    return 1.0 / cocycle_matrix(M, Z).partialPivLu().determinant();
}

const char* torsion_mode_name(TorsionMode mode) {
    switch (mode) {
        case TorsionMode::A: return "A";
        case TorsionMode::A_exceptional: return "A-exceptional";
        case TorsionMode::B: return "B";
        case TorsionMode::B_exceptional: return "B-exceptional";
    }
    return "?";
}

TorsionReport verify_torsion(const CoverSpec& spec, TorsionMode mode,
                             const TransformOptions& opt, double tolerance) {
    const bool exceptional = exceptional_type(spec.D);
    const bool mode_exceptional =
        mode == TorsionMode::A_exceptional || mode == TorsionMode::B_exceptional;
    if (exceptional != mode_exceptional)
        throw HypothesisError(std::string("mode ") + torsion_mode_name(mode) +
                              " is inconsistent with the polarization type");
    if (mode == TorsionMode::B || mode == TorsionMode::B_exceptional) {
        if (!spec.c.is_zero())
            throw HypothesisError("mode B requires characteristic 0");
        for (auto di : spec.D.diag)
            if (di % 2 != 0) throw HypothesisError("mode B requires even type");
        if (spec.D.g() < 3) throw HypothesisError("mode B requires g >= 3");
    } else if (!spec.c.is_half(spec.D)) {
        throw HypothesisError("mode A requires a half-characteristic");
    }

    const ResolvedCover cover = resolve_cover(spec);
    const std::int64_t d = spec.D.d;

    TorsionReport report;
    report.mode = mode;
    report.tolerance = tolerance;

    TransformOptions topt = opt;
    for (std::size_t oi = 0; oi < spec.overlaps.size(); ++oi) {
        const Overlap& o = spec.overlaps[oi];
        const Characteristic ca = chart_characteristic(cover, o.a);
        for (int s = 0; s < spec.samples; ++s) {
            const PeriodMatrix Za = chart_period(cover, o.a, s);
            // decorrelate the sample draws per (overlap, sample)
            topt.seed = opt.seed + 0x9e3779b97f4a7c15ULL * (oi * 1024 + s + 1);
            const std::complex<double> gl = transition_det_push(o.M, Za, ca, topt);
            const std::complex<double> gm = transition_hodge(o.M, Za);
            std::complex<double> combo;
            switch (mode) {
                case TorsionMode::A: combo = ipow(gl, 8) * ipow(gm, 4 * d); break;
                case TorsionMode::A_exceptional:
                    combo = ipow(gl, 24) * ipow(gm, 12 * d);
                    break;
                case TorsionMode::B: combo = gl * ipow(gm, d / 2); break;
                case TorsionMode::B_exceptional:
                    combo = ipow(gl, 3) * ipow(gm, 3 * d / 2);
                    break;
            }
            TorsionRow row;
            row.overlap = static_cast<int>(oi);
            row.sample = s;
            row.combination = combo;
            row.residual = std::abs(combo - 1.0);
            report.max_residual = std::max(report.max_residual, row.residual);
            report.rows.push_back(row);
        }
    }
    report.pass = report.max_residual < tolerance;
    return report;
}

Rat pushforward_coefficient(int g, int n) {
    if (g < 1 || n < 1) throw Error("pushforward_coefficient requires g >= 1, n >= 1");
    Int fact = 1;
    for (int k = 2; k <= g + 1; ++k) fact *= k;
    const Rat b(fact, 2);
    Int n_g = 1;
    for (int k = 0; k < g; ++k) n_g *= n;
    const Int n_g1 = n_g * n;
    const Rat a = Rat(n_g1) * b / Rat(fact) - Rat(n_g, 2);
    const Rat closed = Rat(n_g * (n - 1), 2);
    if (a != closed)
        throw IdentityError("coefficient identity a(n) = n^g (n-1)/2 failed");
    return a;
}

CoverSpec make_two_chart_cover(const PolarizationType& D, const SymplecticElement& M,
                               const CMat& Z0, const CMat& Z1, int samples,
                               const Characteristic& c) {
    CoverSpec spec;
    spec.D = D;
    spec.charts = {"a", "b"};
    spec.overlaps.push_back(Overlap{0, 1, M});
    spec.Z0 = Z0;
    spec.Z1 = Z1;
    spec.samples = samples;
    spec.c = c;
    return spec;
}

} // namespace abeltheta
