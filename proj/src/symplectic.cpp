#include "abeltheta/symplectic.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace abeltheta {

namespace {

IMat diag_scale(const PolarizationType& D) {
    const int g = D.g();
    IMat P = IMat::identity(2 * g);
    for (int i = 0; i < g; ++i) P(g + i, g + i) = Int(D.diag[i]);
    return P;
}

std::string matrix_key(const IMat& m) {
    std::ostringstream os;
    for (const auto& x : m.raw()) os << x << ',';
    return os.str();
}

CMat to_complex(const QMat& m) {
    CMat out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

RMat to_real(const QMat& m) {
    RMat out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

} // namespace

IMat type_form_matrix(const PolarizationType& D) {
    const int g = D.g();
    IMat J(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        J(i, g + i) = Int(D.diag[i]);
        J(g + i, i) = -Int(D.diag[i]);
    }
    return J;
}

bool is_gamma_member(const IMat& R, const PolarizationType& D) {
    if (R.rows() != 2 * D.g() || R.cols() != 2 * D.g()) return false;
    const IMat J = type_form_matrix(D);
    return (R * J * R.transpose()) == J;
}

GammaDElement gamma_membership(const IMat& R, const PolarizationType& D) {
    const int n = 2 * D.g();
    if (R.rows() != n || R.cols() != n)
        throw NotSymplecticError("matrix is not 2g x 2g");
    const IMat J = type_form_matrix(D);
    const IMat residual = R * J * R.transpose() - J;
    if (!residual.is_zero()) {
        std::ostringstream os;
        os << "R J_D ^tR != J_D; residual:";
        for (int i = 0; i < n; ++i) {
            os << " [";
            for (int j = 0; j < n; ++j) os << residual(i, j) << (j + 1 < n ? " " : "]");
        }
        throw NotSymplecticError(os.str());
    }
    return GammaDElement{D, R};
}

GammaDElement gamma_mul(const GammaDElement& a, const GammaDElement& b) {
    return GammaDElement{a.D, a.R * b.R};
}

GammaDElement gamma_inverse(const GammaDElement& a) {
    const int g = a.g();
    const QMat J = to_rational(type_form_matrix(a.D));
    QMat Jinv(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        Jinv(i, g + i) = Rat(-1, a.D.diag[i]);
        Jinv(g + i, i) = Rat(1, a.D.diag[i]);
    }
    const QMat inv = J * to_rational(a.R.transpose()) * Jinv;
    return GammaDElement{a.D, to_integral(inv)};
}

QMat SymplecticElement::matrix() const {
    const int n = g();
    QMat M(2 * n, 2 * n);
    M.set_block(0, 0, alpha);
    M.set_block(0, n, beta);
    M.set_block(n, 0, gamma);
    M.set_block(n, n, delta);
    return M;
}

SymplecticElement to_gd(const GammaDElement& R) {
    const int g = R.g();
    SymplecticElement M;
    M.D = R.D;
    M.R = R.R;
    M.alpha = to_rational(R.blockA());
    M.beta = QMat(g, g);
    M.gamma = QMat(g, g);
    M.delta = QMat(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            M.beta(i, j) = Rat(R.blockB()(i, j) * R.D.diag[j]);
            M.gamma(i, j) = Rat(R.blockGamma()(i, j), R.D.diag[i]);
            M.delta(i, j) = Rat(R.blockDelta()(i, j) * R.D.diag[j], R.D.diag[i]);
        }
    M.integral = is_integral(M.gamma) && is_integral(M.delta);
    return M;
}

GammaDElement from_gd(const SymplecticElement& M) {
    const int g = M.g();
    QMat A = M.alpha;
    QMat B(g, g), G(g, g), Dl(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            B(i, j) = M.beta(i, j) / M.D.diag[j];
            G(i, j) = M.gamma(i, j) * M.D.diag[i];
            Dl(i, j) = M.delta(i, j) * M.D.diag[i] / M.D.diag[j];
        }
    IMat R(2 * g, 2 * g);
    R.set_block(0, 0, to_integral(A));
    R.set_block(0, g, to_integral(B));
    R.set_block(g, 0, to_integral(G));
    R.set_block(g, g, to_integral(Dl));
    return gamma_membership(R, M.D);
}

SymplecticElement gd_mul(const SymplecticElement& a, const SymplecticElement& b) {
    SymplecticElement m;
    m.D = a.D;
    m.alpha = a.alpha * b.alpha + a.beta * b.gamma;
    m.beta = a.alpha * b.beta + a.beta * b.delta;
    m.gamma = a.gamma * b.alpha + a.delta * b.gamma;
    m.delta = a.gamma * b.beta + a.delta * b.delta;
    m.R = a.R * b.R;
    m.integral = is_integral(m.gamma) && is_integral(m.delta) && is_integral(m.alpha) &&
                 is_integral(m.beta);
    return m;
}

SymplecticElement gd_inverse(const SymplecticElement& a) {
    return to_gd(gamma_inverse(GammaDElement{a.D, a.R}));
}

SymplecticElement gd_identity(const PolarizationType& D) {
    return to_gd(GammaDElement{D, IMat::identity(2 * D.g())});
}

CMat cocycle_matrix(const SymplecticElement& M, const PeriodMatrix& Z) {
    return to_complex(M.gamma) * Z.Z + to_complex(M.delta);
}

CMat analytic_rep(const SymplecticElement& M, const PeriodMatrix& Z) {
    const CMat cz = cocycle_matrix(M, Z).transpose();
    return cz.partialPivLu().inverse();
}

QMat rational_rep(const SymplecticElement& M) {
    // ^tM^{-1} = [[delta, -gamma], [-beta, alpha]] for M in Sp_{2g}(Q).
    const int g = M.g();
    QMat r(2 * g, 2 * g);
    r.set_block(0, 0, M.delta);
    r.set_block(0, g, -M.gamma);
    r.set_block(g, 0, -M.beta);
    r.set_block(g, g, M.alpha);
    return r;
}

PeriodMatrix act_on_siegel(const SymplecticElement& M, const PeriodMatrix& Z,
                           ActionVariant* used) {
    const int g = M.g();
    const CMat alpha = to_complex(M.alpha);
    const CMat beta = to_complex(M.beta);
    const CMat cz = cocycle_matrix(M, Z);
    Eigen::PartialPivLU<CMat> lu(cz);
    const CMat Dm = Z.D.matrix().cast<std::complex<double>>();

    const CMat num_plain = alpha * Z.Z + beta;
    const CMat num_scaled = alpha * Z.Z + beta * Dm;
    // right division: N (gamma Z + delta)^{-1} = ((cz^T)^{-1} N^T)^T
    Eigen::PartialPivLU<CMat> luT(CMat(cz.transpose()));
    const CMat Zp_plain = luT.solve(num_plain.transpose()).transpose();
    const CMat Zp_scaled = luT.solve(num_scaled.transpose()).transpose();

    const CMat phi_a = analytic_rep(M, Z);
    const RMat rr = to_real(rational_rep(M));

    auto diagram_ok = [&](const CMat& Zp) {
        // j_Z = (Z, I); lattice generators e_i and d_i e_{g+i}.
        CMat jz(g, 2 * g), jzp(g, 2 * g);
        jz << Z.Z, CMat::Identity(g, g);
        jzp << Zp, CMat::Identity(g, g);
        const CMat lhs = phi_a * jz;
        const CMat rhs = jzp * rr.cast<std::complex<double>>();
        double scale = 1.0 + lhs.cwiseAbs().maxCoeff();
        RMat gen = RMat::Identity(2 * g, 2 * g);
        for (int i = 0; i < g; ++i) gen(g + i, g + i) = static_cast<double>(Z.D.diag[i]);
        const CMat diff = (lhs - rhs) * gen.cast<std::complex<double>>();
        return diff.cwiseAbs().maxCoeff() <= 1e3 * tolerances().lin * scale;
    };

    CMat Zp;
    ActionVariant v;
    if (diagram_ok(Zp_plain)) {
        Zp = Zp_plain;
        v = ActionVariant::plain;
    } else if (diagram_ok(Zp_scaled)) {
        Zp = Zp_scaled;
        v = ActionVariant::scaled_beta;
    } else {
        throw DiagramMismatchError(
            "neither variant of M(Z) satisfies the lattice identity (convention bug)");
    }
    if (used) *used = v;
    return validate_period_matrix(Zp, Z.D);
}

Characteristic transform_characteristic(const SymplecticElement& M, const Characteristic& c) {
    const int g = M.g();
    const RMat alpha = to_real(M.alpha);
    const RMat beta = to_real(M.beta);
    const RMat gamma = to_real(M.gamma);
    const RMat delta = to_real(M.delta);

    // Exact diagonal vectors of D gamma ^t delta and alpha ^t beta.
    RVec diag1(g), diag2(g);
    for (int i = 0; i < g; ++i) {
        Rat s1 = 0, s2 = 0;
        for (int k = 0; k < g; ++k) {
            s1 += Rat(M.D.diag[i]) * M.gamma(i, k) * M.delta(i, k);
            s2 += M.alpha(i, k) * M.beta(i, k);
        }
        diag1[i] = to_double(s1);
        diag2[i] = to_double(s2);
    }
    Characteristic out;
    out.c1 = delta * c.c1 - gamma * c.c2 + 0.5 * diag1;
    out.c2 = -beta * c.c1 + alpha * c.c2 + 0.5 * diag2;
    return out;
}

std::vector<SymplecticElement> generators(const PolarizationType& D) {
    const int g = D.g();
    std::vector<SymplecticElement> out;

    // (0 -D; D^{-1} 0), source J = (0 -I; I 0).
    {
        IMat J(2 * g, 2 * g);
        for (int i = 0; i < g; ++i) {
            J(i, g + i) = -1;
            J(g + i, i) = 1;
        }
        out.push_back(to_gd(gamma_membership(J, D)));
    }

    auto try_add = [&](const IMat& R) {
        if (is_gamma_member(R, D)) out.push_back(to_gd(GammaDElement{D, R}));
    };

    // Upper elementary (I B; 0 I) with B D symmetric.
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            IMat B(g, g);
            if (i == j) {
                B(i, i) = 1;
            } else {
                B(i, j) = 1;
                B(j, i) = Int(D.diag[j] / D.diag[i]);
            }
            IMat R = IMat::identity(2 * g);
            R.set_block(0, g, B);
            try_add(R);
        }

    // Lower elementary (I 0; D S I) with S symmetric.
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            IMat S(g, g);
            if (i == j)
                S(i, i) = 1;
            else
                S(i, j) = S(j, i) = 1;
            IMat G(g, g);
            for (int r = 0; r < g; ++r)
                for (int c = 0; c < g; ++c) G(r, c) = Int(D.diag[r]) * S(r, c);
            IMat R = IMat::identity(2 * g);
            R.set_block(g, 0, G);
            try_add(R);
        }

    // GL-type (A 0; 0 D ^tA^{-1} D^{-1}) for A preserving the divisor ladder.
    auto gl_candidate = [&](const IMat& A) {
        QMat Aq = to_rational(A);
        QMat Ainv = invert(Aq);
        QMat Dl(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                Dl(i, j) = Ainv(j, i) * Rat(D.diag[i], D.diag[j]);
        if (!is_integral(Dl)) return;
        IMat R(2 * g, 2 * g);
        R.set_block(0, 0, A);
        R.set_block(g, g, to_integral(Dl));
        try_add(R);
    };
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            if (i == j) continue;
            IMat A = IMat::identity(g);
            A(i, j) = (i < j) ? Int(1) : Int(D.diag[i] / D.diag[j]);
            gl_candidate(A);
        }
    {
        IMat A = IMat::identity(g);
        A(0, 0) = -1;
        gl_candidate(A);
    }
    for (int i = 0; i + 1 < g; ++i) {
        if (D.diag[i] != D.diag[i + 1]) continue;
        IMat A = IMat::identity(g);
        A(i, i) = A(i + 1, i + 1) = 0;
        A(i, i + 1) = A(i + 1, i) = 1;
        gl_candidate(A);
    }
    return out;
}

SpDElement spd_projection(const GammaDElement& R) {
    const int g = R.g();
    const int n = 2 * g;
    auto dbar = [&](int i) { return R.D.diag[i % g]; };
    IMat res(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Int num = Int(dbar(i)) * R.R(j, i);
            if (num % Int(dbar(j)) != 0)
                throw NonIntegralError("Dbar ^tR Dbar^{-1} is not integral (internal)");
            Int v = num / Int(dbar(j));
            v %= Int(dbar(i));
            if (v < 0) v += Int(dbar(i));
            res(i, j) = v;
        }
    return SpDElement{R.D, res};
}

SpDElement spd_mul(const SpDElement& a, const SpDElement& b) {
    const int g = a.D.g();
    const int n = 2 * g;
    auto dbar = [&](int i) { return a.D.diag[i % g]; };
    // Multiplication by the transpose is contravariant, so the product in
    // Sp(D) that satisfies pi(R1 R2) = pi(R1) pi(R2) reverses the residues.
    IMat prod = b.residues * a.residues;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Int v = prod(i, j) % Int(dbar(i));
            if (v < 0) v += Int(dbar(i));
            prod(i, j) = v;
        }
    return SpDElement{a.D, prod};
}

bool in_gamma_d_kernel(const GammaDElement& R) {
    const int g = R.g();
    const int n = 2 * g;
    const IMat diff = R.R - IMat::identity(n);
    for (int i = 0; i < n; ++i) {
        const Int m(R.D.diag[i % g]);
        for (int j = 0; j < n; ++j)
            if (diff(i, j) % m != 0) return false;
    }
    return true;
}

bool spd_preserves_pairing(const SpDElement& s) {
    // e^D((x1,x2),(y1,y2)) = ^t x1 D^{-1} y2 - ^t y1 D^{-1} x2 mod 1, checked
    // exactly on all pairs of standard generators.
    const int g = s.D.g();
    const int n = 2 * g;
    auto pairing = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        Rat p = 0;
        for (int i = 0; i < g; ++i) {
            p += Rat(x[i] * y[g + i], s.D.diag[i]);
            p -= Rat(y[i] * x[g + i], s.D.diag[i]);
        }
        // reduce mod 1
        const Int num = boost::multiprecision::numerator(p);
        const Int den = boost::multiprecision::denominator(p);
        Int r = num % den;
        if (r < 0) r += den;
        return Rat(r, den);
    };
    auto apply = [&](int col) {
        std::vector<Int> v(n);
        for (int i = 0; i < n; ++i) v[i] = s.residues(i, col);
        return v;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            std::vector<Int> ea(n), eb(n);
            ea[a] = 1;
            eb[b] = 1;
            if (pairing(apply(a), apply(b)) != pairing(ea, eb)) return false;
        }
    return true;
}

DecomposeResult decompose_into_generators(const GammaDElement& R, std::size_t budget) {
    constexpr std::size_t kStateCap = 1'000'000;
    budget = std::min(budget, kStateCap);
    DecomposeResult result;
    const auto gens = generators(R.D);
    const int n = 2 * R.g();

    std::vector<IMat> letters;          // generator matrices and inverses
    std::vector<IMat> letters_inv;
    std::vector<int> letter_code;       // word encoding: k or ~k
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const IMat inv = gamma_inverse(GammaDElement{R.D, gens[k].R}).R;
        letters.push_back(gens[k].R);
        letters_inv.push_back(inv);
        letter_code.push_back(static_cast<int>(k));
        letters.push_back(inv);
        letters_inv.push_back(gens[k].R);
        letter_code.push_back(~static_cast<int>(k));
    }

    const IMat id = IMat::identity(n);
    if (R.R == id) {
        result.found = true;
        return result;
    }

    struct Node {
        IMat m;
        std::vector<int> word;
    };
    // forward holds products P(word); backward holds R * P(word)^{-1}, so a
    // meet P_f == K_b yields R = P_f * P(word_b).
    std::unordered_map<std::string, std::vector<int>> fwd, bwd;
    std::deque<Node> fq, bq;
    fwd.emplace(matrix_key(id), std::vector<int>{});
    bwd.emplace(matrix_key(R.R), std::vector<int>{});
    fq.push_back({id, {}});
    bq.push_back({R.R, {}});
    std::size_t states = 2;

    auto check_meet_fwd = [&](const IMat& m, const std::vector<int>& w) -> bool {
        auto it = bwd.find(matrix_key(m));
        if (it == bwd.end()) return false;
        result.found = true;
        result.word = w;
        result.word.insert(result.word.end(), it->second.begin(), it->second.end());
        return true;
    };
    auto check_meet_bwd = [&](const IMat& m, const std::vector<int>& w) -> bool {
        auto it = fwd.find(matrix_key(m));
        if (it == fwd.end()) return false;
        result.found = true;
        result.word = it->second;
        result.word.insert(result.word.end(), w.begin(), w.end());
        return true;
    };

    if (check_meet_fwd(id, {})) {
        result.states = states;
        return result;
    }

    bool expand_forward = true;
    while ((!fq.empty() || !bq.empty()) && states < budget) {
        auto& q = expand_forward ? fq : bq;
        if (q.empty()) {
            expand_forward = !expand_forward;
            continue;
        }
        // expand one full BFS level
        const std::size_t level = q.size();
        for (std::size_t t = 0; t < level && states < budget; ++t) {
            Node cur = q.front();
            q.pop_front();
            for (std::size_t li = 0; li < letters.size(); ++li) {
                IMat next = expand_forward ? cur.m * letters[li] : cur.m * letters_inv[li];
                const std::string key = matrix_key(next);
                auto& side = expand_forward ? fwd : bwd;
                if (side.count(key)) continue;
                std::vector<int> w = cur.word;
                if (expand_forward)
                    w.push_back(letter_code[li]);
                else
                    w.insert(w.begin(), letter_code[li]);
                side.emplace(key, w);
                ++states;
                if (expand_forward ? check_meet_fwd(next, w) : check_meet_bwd(next, w)) {
                    result.states = states;
                    return result;
                }
                (expand_forward ? fq : bq).push_back({std::move(next), std::move(w)});
                if (states >= budget) break;
            }
        }
        expand_forward = !expand_forward;
    }
    result.states = states;
    return result;
}

SymplecticElement word_to_element(const PolarizationType& D, const std::vector<int>& word) {
    const auto gens = generators(D);
    SymplecticElement m = gd_identity(D);
    for (int code : word) {
        const SymplecticElement& gmat = gens.at(static_cast<std::size_t>(code >= 0 ? code : ~code));
        m = gd_mul(m, code >= 0 ? gmat : gd_inverse(gmat));
    }
    return m;
}

SymplecticElement random_gd_element(Rng& rng, const PolarizationType& D, int max_len,
                                    bool integral_only) {
    const auto gens = generators(D);
    std::size_t first = integral_only ? 1 : 0;  // index 0 is the J-type element
    const int len = static_cast<int>(rng.uniform_int(1, max_len));
    SymplecticElement m = gd_identity(D);
    for (int i = 0; i < len; ++i) {
        const std::size_t k =
            static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(first),
                                                     static_cast<std::int64_t>(gens.size() - 1)));
        SymplecticElement gmat = gens[k];
        if (rng.uniform() < 0.5) gmat = gd_inverse(gmat);
        m = gd_mul(m, gmat);
    }
    return m;
}

} // namespace abeltheta
