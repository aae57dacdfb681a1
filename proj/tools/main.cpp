// Command-line front end: theta evaluation, transformation classification,
// DFT determinants, torsion verification, the exact pushforward coefficient,
// acceptance self-test.  All reports are JSON with [re, im] complex values.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "abeltheta/json_io.hpp"
#include "criteria.hpp"

namespace at = abeltheta;
using at::json;

namespace {

// "i", "2i", "1+2i", "-0.5-i", "3" -> complex
std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw at::Error("empty complex literal");

    auto parse_part = [](const std::string& p, bool imag_unit) -> double {
        if (imag_unit) {
            if (p.empty() || p == "+") return 1.0;
            if (p == "-") return -1.0;
        }
        std::size_t pos = 0;
        const double x = std::stod(p, &pos);
        if (pos != p.size()) throw at::Error("bad number '" + p + "'");
        return x;
    };

    // split at the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    try {
        if (s.back() == 'i' || s.back() == 'I') {
            const std::string body = s.substr(0, s.size() - 1);
            if (split == std::string::npos)
                return {0.0, parse_part(body, true)};
            return {parse_part(s.substr(0, split), false),
                    parse_part(body.substr(split), true)};
        }
        return {parse_part(s, false), 0.0};
    } catch (const std::exception&) {
        throw at::Error("cannot parse complex literal '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (out.empty()) out.push_back("");
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw at::Error("cannot open file '" + path + "'");
    json j;
    in >> j;
    return j;
}

// Inline "1+i,0;0,2i" (rows by ';') or "@file.json".
at::CMat parse_cmat(const std::string& text) {
    if (!text.empty() && text[0] == '@') return at::cmat_from_json(load_json_file(text.substr(1)));
    if (!text.empty() && (text[0] == '[' || text[0] == '{'))
        return at::cmat_from_json(json::parse(text));
    const auto rows = split(text, ';');
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(split(rows[0], ',').size());
    at::CMat m(r, c);
    for (int i = 0; i < r; ++i) {
        const auto cells = split(rows[i], ',');
        if (static_cast<int>(cells.size()) != c) throw at::Error("ragged matrix literal");
        for (int j = 0; j < c; ++j) m(i, j) = parse_complex(cells[j]);
    }
    return m;
}

at::IMat parse_imat(const std::string& text) {
    if (!text.empty() && text[0] == '@') return at::imat_from_json(load_json_file(text.substr(1)));
    if (!text.empty() && text[0] == '[') return at::imat_from_json(json::parse(text));
    const auto rows = split(text, ';');
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(split(rows[0], ',').size());
    at::IMat m(r, c);
    for (int i = 0; i < r; ++i) {
        const auto cells = split(rows[i], ',');
        if (static_cast<int>(cells.size()) != c) throw at::Error("ragged matrix literal");
        for (int j = 0; j < c; ++j) m(i, j) = at::Int(cells[j]);
    }
    return m;
}

at::RVec parse_rvec(const std::string& text, int g) {
    if (text.empty()) return at::RVec::Zero(g);
    const auto cells = split(text, ',');
    at::RVec v(static_cast<int>(cells.size()));
    for (int i = 0; i < v.size(); ++i) {
        // accept "p/q" fractions for characteristics
        const auto slash = cells[i].find('/');
        if (slash != std::string::npos)
            v[i] = std::stod(cells[i].substr(0, slash)) / std::stod(cells[i].substr(slash + 1));
        else
            v[i] = std::stod(cells[i]);
    }
    if (v.size() != g) throw at::Error("vector length does not match g");
    return v;
}

at::CVec parse_cvec(const std::string& text, int g) {
    if (text.empty()) return at::CVec::Zero(g);
    const auto cells = split(text, ',');
    at::CVec v(static_cast<int>(cells.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = parse_complex(cells[i]);
    if (v.size() != g) throw at::Error("vector length does not match g");
    return v;
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw at::Error("cannot write '" + out_path + "'");
        out << text;
    }
}

struct CommonArgs {
    std::string D;
    std::string Z;
    std::string c1, c2;
    double eps = 1e-10;
    std::uint64_t seed = at::Rng::default_seed;
    std::string out;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta functions with characteristics, symplectic actions and torsion checks"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string v_text, R_text, word_text, mode_text, cover_text, criteria_text;
    bool basis = false, extended = false;
    int arg_g = 0, arg_n = 0;

    auto add_common = [&](CLI::App* cmd, bool need_D) {
        auto* od = cmd->add_option("--D", a.D, "polarization type, e.g. 2,4");
        if (need_D) od->required();
        cmd->add_option("--eps", a.eps, "truncation error for theta sums");
        cmd->add_option("--seed", a.seed, "seed for all random draws");
        cmd->add_option("--out", a.out, "write the JSON report here instead of stdout");
    };

    auto* theta_cmd = app.add_subcommand("theta", "evaluate theta[c1;c2](v, Z)");
    add_common(theta_cmd, true);
    theta_cmd->add_option("--Z", a.Z, "period matrix, inline rows 'a;b' or @file.json")->required();
    theta_cmd->add_option("--c1", a.c1, "characteristic c1 (comma list, fractions ok)");
    theta_cmd->add_option("--c2", a.c2, "characteristic c2");
    theta_cmd->add_option("--v", v_text, "evaluation point (complex entries)");
    theta_cmd->add_flag("--basis", basis, "emit the full theta basis over Z_D");
    theta_cmd->add_flag("--extended", extended, "accumulate in extended precision");

    auto* classify_cmd = app.add_subcommand("classify", "extract C_M and classify det C_M");
    add_common(classify_cmd, true);
    classify_cmd->add_option("--Z", a.Z, "period matrix")->required();
    classify_cmd->add_option("--R,--M", R_text, "integral Gamma_D matrix (2g x 2g)");
    classify_cmd->add_option("--word", word_text,
                             "generator word, e.g. '0,2,-1' (-k-1 = inverse of generator k)");
    classify_cmd->add_option("--c1", a.c1, "characteristic c1");
    classify_cmd->add_option("--c2", a.c2, "characteristic c2");
    classify_cmd->add_option("--mode", mode_text, "symmetric | totally_symmetric")
        ->default_val("symmetric");

    auto* dft_cmd = app.add_subcommand("dft", "det of (e(2 pi i ^t m D^{-1} n)) over Z_D");
    add_common(dft_cmd, true);

    auto* torsion_cmd = app.add_subcommand("torsion", "verify a torsion relation on a cover");
    add_common(torsion_cmd, false);
    torsion_cmd->add_option("--cover", cover_text, "cover spec JSON (@file or inline)")->required();
    torsion_cmd->add_option("--mode", mode_text, "A | A-exceptional | B | B-exceptional")
        ->required();

    auto* coeff_cmd = app.add_subcommand("coeff", "pushforward coefficient a(n), exact");
    coeff_cmd->add_option("--g", arg_g, "fiber dimension")->required();
    coeff_cmd->add_option("--n", arg_n, "tensor power")->required();
    coeff_cmd->add_option("--out", a.out, "write the JSON report here instead of stdout");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    selftest_cmd->add_option("--criteria", criteria_text, "subset, e.g. 1,4,8 (default: all)");
    selftest_cmd->add_option("--seed", a.seed, "seed for all random draws");
    selftest_cmd->add_option("--out", a.out, "write the JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (theta_cmd->parsed()) {
            const at::PolarizationType D =
                at::validate_polarization([&] {
                    std::vector<std::int64_t> diag;
                    for (const auto& s : split(a.D, ',')) diag.push_back(std::stoll(s));
                    return diag;
                }());
            const at::PeriodMatrix Z = at::validate_period_matrix(parse_cmat(a.Z), D);
            at::Characteristic c = at::Characteristic::zero(D.g());
            c.c1 = parse_rvec(a.c1, D.g());
            c.c2 = parse_rvec(a.c2, D.g());
            const at::CVec v = parse_cvec(v_text, D.g());
            at::ThetaOptions opt;
            opt.eps = a.eps;
            opt.extended = extended;
            json report;
            report["request"] = {{"D", at::polarization_to_json(D)},
                                 {"Z", at::cmat_to_json(Z.Z)},
                                 {"characteristic", at::characteristic_to_json(c)},
                                 {"v", at::cmat_to_json(v.transpose())},
                                 {"eps", at::num15(a.eps)}};
            if (basis) {
                const at::ThetaBasis tb = at::theta_basis(c, Z, v, opt);
                json vals = json::array();
                for (const auto& z : tb.values) vals.push_back(at::complex_to_json(z));
                report["values"] = std::move(vals);
                report["radius"] = at::num15(tb.radius);
            } else {
                const at::ThetaValue t = at::theta_char(c, v, Z, opt);
                report["value"] = at::complex_to_json(t.value);
                report["radius"] = at::num15(t.radius);
                report["terms"] = t.terms;
            }
            emit(report, a.out);
            return 0;
        }

        if (classify_cmd->parsed()) {
            const at::PolarizationType D =
                at::validate_polarization([&] {
                    std::vector<std::int64_t> diag;
                    for (const auto& s : split(a.D, ',')) diag.push_back(std::stoll(s));
                    return diag;
                }());
            const at::PeriodMatrix Z = at::validate_period_matrix(parse_cmat(a.Z), D);
            at::SymplecticElement M;
            if (!R_text.empty()) {
                M = at::to_gd(at::gamma_membership(parse_imat(R_text), D));
            } else if (!word_text.empty()) {
                std::vector<int> word;
                for (const auto& s : split(word_text, ',')) word.push_back(std::stoi(s));
                M = at::word_to_element(D, word);
            } else {
                throw at::Error("classify needs --R or --word");
            }
            at::Characteristic c = at::Characteristic::zero(D.g());
            c.c1 = parse_rvec(a.c1, D.g());
            c.c2 = parse_rvec(a.c2, D.g());
            const at::BundleMode mode = mode_text == "totally_symmetric"
                                            ? at::BundleMode::totally_symmetric
                                            : at::BundleMode::symmetric;
            at::TransformOptions opt;
            opt.eps = a.eps;
            opt.seed = a.seed;
            json report;
            report["request"] = {{"D", at::polarization_to_json(D)},
                                 {"Z", at::cmat_to_json(Z.Z)},
                                 {"R", at::imat_to_json(M.R)},
                                 {"M", json{{"alpha", at::qmat_to_json(M.alpha)},
                                            {"beta", at::qmat_to_json(M.beta)},
                                            {"gamma", at::qmat_to_json(M.gamma)},
                                            {"delta", at::qmat_to_json(M.delta)}}},
                                 {"characteristic", at::characteristic_to_json(c)},
                                 {"mode", mode_text},
                                 {"eps", at::num15(a.eps)},
                                 {"seed", a.seed}};
            try {
                const at::Classification cls = at::classify(M, Z, c, mode, opt);
                report["detCM"] = at::complex_to_json(cls.detCM);
                report["order"] = cls.order ? json(*cls.order) : json(nullptr);
                report["order_bound"] = cls.order_bound;
                report["conditioning"] = at::num15(cls.conditioning);
                report["pass"] = true;
                emit(report, a.out);
                return 0;
            } catch (const at::ClassificationError& e) {
                report["pass"] = false;
                report["error"] = e.what();
                emit(report, a.out);
                return 2;
            }
        }

        if (dft_cmd->parsed()) {
            const at::PolarizationType D =
                at::validate_polarization([&] {
                    std::vector<std::int64_t> diag;
                    for (const auto& s : split(a.D, ',')) diag.push_back(std::stoll(s));
                    return diag;
                }());
            json report;
            report["request"] = {{"D", at::polarization_to_json(D)}};
            try {
                const at::DftResult res = at::dft_determinant(D);
                const std::complex<double> oracle = at::dft_determinant_tensor_oracle(D);
                const double mag =
                    std::pow(static_cast<double>(D.d), static_cast<double>(D.d) / 2.0);
                report["det"] = at::complex_to_json(res.det);
                report["zeta4"] = at::complex_to_json(res.zeta4);
                report["tensor_oracle"] = at::complex_to_json(oracle);
                const bool agrees = std::abs(res.det - oracle) <= 1e-8 * mag;
                report["oracle_agrees"] = agrees;
                report["pass"] = agrees;
                emit(report, a.out);
                return agrees ? 0 : 2;
            } catch (const at::IdentityError& e) {
                report["pass"] = false;
                report["error"] = e.what();
                emit(report, a.out);
                return 2;
            }
        }

        if (torsion_cmd->parsed()) {
            const json jc = !cover_text.empty() && cover_text[0] == '@'
                                ? load_json_file(cover_text.substr(1))
                                : json::parse(cover_text);
            const at::CoverSpec spec = at::cover_from_json(jc);
            at::TorsionMode mode;
            if (mode_text == "A") mode = at::TorsionMode::A;
            else if (mode_text == "A-exceptional") mode = at::TorsionMode::A_exceptional;
            else if (mode_text == "B") mode = at::TorsionMode::B;
            else if (mode_text == "B-exceptional") mode = at::TorsionMode::B_exceptional;
            else throw at::Error("unknown mode '" + mode_text + "'");
            at::TransformOptions opt;
            opt.eps = a.eps;
            opt.seed = a.seed;
            const at::TorsionReport rep = at::verify_torsion(spec, mode, opt);
            json report = at::torsion_report_to_json(rep);
            report["request"] = at::cover_to_json(spec);
            emit(report, a.out);
            return rep.pass ? 0 : 2;
        }

        if (coeff_cmd->parsed()) {
            json report;
            report["request"] = {{"g", arg_g}, {"n", arg_n}};
            const at::Rat an = at::pushforward_coefficient(arg_g, arg_n);
            report["a_n"] = at::rat_to_json(an);
            emit(report, a.out);
            return 0;
        }

        if (selftest_cmd->parsed()) {
            std::vector<int> ids;
            if (!criteria_text.empty())
                for (const auto& s : split(criteria_text, ',')) ids.push_back(std::stoi(s));
            std::vector<at::accept::CriterionResult> results;
            const bool ok = at::accept::run_acceptance(ids, a.seed, &results);
            json rows = json::array();
            for (const auto& r : results)
                rows.push_back(json{{"criterion", r.id},
                                    {"pass", r.pass},
                                    {"measured", at::num15(r.measured)},
                                    {"threshold", at::num15(r.threshold)},
                                    {"seconds", at::num15(r.seconds)},
                                    {"detail", r.detail}});
            json report{{"pass", ok}, {"criteria", std::move(rows)}, {"seed", a.seed}};
            if (!a.out.empty()) emit(report, a.out);
            return ok ? 0 : 2;
        }
    } catch (const at::IdentityError& e) {
        std::fprintf(stderr, "identity violation: %s\n", e.what());
        emit(json{{"pass", false}, {"error", e.what()}}, a.out);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        emit(json{{"pass", false}, {"error", e.what()}}, a.out);
        return 1;
    }
    return 1;
}
