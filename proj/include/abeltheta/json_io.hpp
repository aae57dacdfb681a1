#pragma once

#include <json.hpp>

#include "abeltheta/fibration.hpp"
#include "abeltheta/transform.hpp"

namespace abeltheta {

using json = nlohmann::json;

// Numbers pass through %.15g so reports are stable byte for byte.
json num15(double x);
json complex_to_json(const std::complex<double>& z);  // [re, im]
std::complex<double> complex_from_json(const json& j);

// Matrices are arrays of rows; complex entries are [re, im] pairs.
json cmat_to_json(const CMat& m);
CMat cmat_from_json(const json& j);
json rvec_to_json(const RVec& v);
RVec rvec_from_json(const json& j);
json imat_to_json(const IMat& m);
IMat imat_from_json(const json& j);

json polarization_to_json(const PolarizationType& D);
PolarizationType polarization_from_json(const json& j);

json characteristic_to_json(const Characteristic& c);
Characteristic characteristic_from_json(const json& j, int g);

// Exact rationals serialize as "p/q" strings.
json rat_to_json(const Rat& q);
Rat rat_from_json(const json& j);
json qmat_to_json(const QMat& m);
QMat qmat_from_json(const json& j);

json transformation_result_to_json(const TransformationResult& r);

// CoverSpec schema:
// { "charts": [id...], "overlaps": [{"a": id, "b": id, "R": int matrix}],
//   "path": {"Z0": mat, "Z1": mat, "samples": k},
//   "D": [ints], "characteristic": {"c1": [...], "c2": [...]} }
json cover_to_json(const CoverSpec& spec);
CoverSpec cover_from_json(const json& j);

json torsion_report_to_json(const TorsionReport& report);

} // namespace abeltheta
