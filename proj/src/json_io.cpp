#include "abeltheta/json_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace abeltheta {

json num15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return json(std::strtod(buf, nullptr));
}

json complex_to_json(const std::complex<double>& z) {
    return json::array({num15(z.real()), num15(z.imag())});
}

std::complex<double> complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error("expected complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cmat_to_json(const CMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMat cmat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("expected a matrix (array of rows)");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw Error("ragged matrix rows");
        for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json rvec_to_json(const RVec& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(num15(v[i]));
    return out;
}

RVec rvec_from_json(const json& j) {
    if (!j.is_array()) throw Error("expected an array of numbers");
    RVec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) {
        if (!j[i].is_number()) throw Error("expected an array of numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

json imat_to_json(const IMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_int64(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

IMat imat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("expected an integer matrix");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    IMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw Error("ragged matrix rows");
        for (int k = 0; k < cols; ++k) {
            if (!j[i][k].is_number_integer()) throw Error("expected integer entries");
            m(i, k) = Int(j[i][k].get<std::int64_t>());
        }
    }
    return m;
}

json polarization_to_json(const PolarizationType& D) {
    json out = json::array();
    for (auto di : D.diag) out.push_back(di);
    return out;
}

PolarizationType polarization_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("polarization type must be an integer array");
    std::vector<std::int64_t> diag;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw Error("polarization entries must be integers");
        diag.push_back(e.get<std::int64_t>());
    }
    return validate_polarization(diag);
}

json characteristic_to_json(const Characteristic& c) {
    return json{{"c1", rvec_to_json(c.c1)}, {"c2", rvec_to_json(c.c2)}};
}

Characteristic characteristic_from_json(const json& j, int g) {
    Characteristic c = Characteristic::zero(g);
    if (j.contains("c1")) c.c1 = rvec_from_json(j["c1"]);
    if (j.contains("c2")) c.c2 = rvec_from_json(j["c2"]);
    if (c.c1.size() != g || c.c2.size() != g)
        throw Error("characteristic dimension does not match g");
    return c;
}

json rat_to_json(const Rat& q) { return json(rat_to_string(q)); }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw Error("expected a rational as integer or \"p/q\" string");
}

json qmat_to_json(const QMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

QMat qmat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("expected a rational matrix");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw Error("ragged matrix rows");
        for (int k = 0; k < cols; ++k) m(i, k) = rat_from_json(j[i][k]);
    }
    return m;
}

json transformation_result_to_json(const TransformationResult& r) {
    json out;
    out["detCM"] = complex_to_json(r.detCM);
    out["order"] = r.order ? json(*r.order) : json(nullptr);
    out["conditioning"] = num15(r.conditioning);
    out["variant"] = r.variant == ActionVariant::plain ? "plain" : "scaled_beta";
    out["C_M"] = cmat_to_json(r.C_M);
    return out;
}

json cover_to_json(const CoverSpec& spec) {
    json overlaps = json::array();
    for (const auto& o : spec.overlaps) {
        overlaps.push_back(json{{"a", spec.charts.at(o.a)},
                                {"b", spec.charts.at(o.b)},
                                {"R", imat_to_json(o.M.R)}});
    }
    json out;
    out["charts"] = spec.charts;
    out["overlaps"] = std::move(overlaps);
    out["path"] = json{{"Z0", cmat_to_json(spec.Z0)},
                       {"Z1", cmat_to_json(spec.Z1)},
                       {"samples", spec.samples}};
    out["D"] = polarization_to_json(spec.D);
    out["characteristic"] = characteristic_to_json(spec.c);
    return out;
}

CoverSpec cover_from_json(const json& j) {
    CoverSpec spec;
    spec.D = polarization_from_json(j.at("D"));
    if (!j.at("charts").is_array() || j["charts"].empty())
        throw Error("cover needs a chart list");
    for (const auto& c : j["charts"]) spec.charts.push_back(c.get<std::string>());

    auto chart_index = [&](const json& v) -> int {
        if (v.is_number_integer()) {
            const int k = v.get<int>();
            if (k < 0 || k >= static_cast<int>(spec.charts.size()))
                throw Error("chart index out of range");
            return k;
        }
        const std::string name = v.get<std::string>();
        for (std::size_t k = 0; k < spec.charts.size(); ++k)
            if (spec.charts[k] == name) return static_cast<int>(k);
        throw Error("unknown chart '" + name + "'");
    };

    for (const auto& jo : j.at("overlaps")) {
        Overlap o;
        o.a = chart_index(jo.at("a"));
        o.b = chart_index(jo.at("b"));
        o.M = to_gd(gamma_membership(imat_from_json(jo.at("R")), spec.D));
        spec.overlaps.push_back(std::move(o));
    }
    const json& path = j.at("path");
    spec.Z0 = cmat_from_json(path.at("Z0"));
    spec.Z1 = cmat_from_json(path.at("Z1"));
    spec.samples = path.value("samples", 5);
    spec.c = j.contains("characteristic")
                 ? characteristic_from_json(j["characteristic"], spec.D.g())
                 : Characteristic::zero(spec.D.g());
    return spec;
}

json torsion_report_to_json(const TorsionReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back(json{{"overlap", r.overlap},
                            {"sample", r.sample},
                            {"combination", complex_to_json(r.combination)},
                            {"residual", num15(r.residual)}});
    }
    return json{{"mode", torsion_mode_name(report.mode)},
                {"max_residual", num15(report.max_residual)},
                {"tolerance", num15(report.tolerance)},
                {"pass", report.pass},
                {"rows", std::move(rows)}};
}

} // namespace abeltheta
