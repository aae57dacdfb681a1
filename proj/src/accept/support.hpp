#pragma once

#include "abeltheta/rng.hpp"
#include "abeltheta/symplectic.hpp"

namespace abeltheta::accept {

// Z = X + iY with small symmetric X and Y = A^tA + s I, s >= 0.4, so test
// inputs stay reasonably reduced.
inline PeriodMatrix random_siegel(Rng& rng, const PolarizationType& D) {
    const int g = D.g();
    RMat X(g, g), A(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) A(i, j) = 0.35 * rng.normal();
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) X(i, j) = X(j, i) = rng.uniform(-0.5, 0.5);
    RMat Y = A * A.transpose() + (0.4 + rng.uniform(0.0, 0.8)) * RMat::Identity(g, g);
    CMat Z = X.cast<std::complex<double>>() +
             std::complex<double>(0, 1) * Y.cast<std::complex<double>>();
    return validate_period_matrix(Z, D);
}

// c in (1/2) Lambda(H): c1 in (1/2) D^{-1} Z^g, c2 in (1/2) Z^g.
inline Characteristic random_half_characteristic(Rng& rng, const PolarizationType& D) {
    const int g = D.g();
    Characteristic c = Characteristic::zero(g);
    for (int i = 0; i < g; ++i) {
        c.c1[i] = static_cast<double>(rng.uniform_int(0, 2 * D.diag[i] - 1)) /
                  static_cast<double>(2 * D.diag[i]);
        c.c2[i] = 0.5 * static_cast<double>(rng.uniform_int(0, 1));
    }
    return c;
}

inline CVec random_point(Rng& rng, int g, double im_scale = 0.5) {
    CVec v(g);
    for (int i = 0; i < g; ++i)
        v[i] = std::complex<double>(rng.uniform(-1.0, 1.0), im_scale * rng.uniform(-1.0, 1.0));
    return v;
}

// All divisor chains d_1 | ... | d_g with product <= dmax.
inline std::vector<std::vector<std::int64_t>> divisor_chains(int g, std::int64_t dmax) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    auto rec = [&](auto&& self, int depth, std::int64_t prev, std::int64_t prod) -> void {
        if (depth == g) {
            out.push_back(cur);
            return;
        }
        for (std::int64_t next = prev; prod * next <= dmax; next += prev) {
            cur.push_back(next);
            self(self, depth + 1, next, prod * next);
            cur.pop_back();
        }
    };
    rec(rec, 0, 1, 1);
    return out;
}

// All divisor chains of length g with every entry <= entry_max.
inline std::vector<std::vector<std::int64_t>> divisor_chains_entry_bound(int g,
                                                                         std::int64_t entry_max) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    auto rec = [&](auto&& self, int depth, std::int64_t prev) -> void {
        if (depth == g) {
            out.push_back(cur);
            return;
        }
        for (std::int64_t next = prev; next <= entry_max; next += prev) {
            cur.push_back(next);
            self(self, depth + 1, next);
            cur.pop_back();
        }
    };
    rec(rec, 0, 1);
    return out;
}

} // namespace abeltheta::accept
