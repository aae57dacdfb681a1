#pragma once

#include "abeltheta/types.hpp"

namespace abeltheta::accept {

// Independent oracle: plain box enumeration with one std::exp per term and
// long double accumulation.  Shares no code with the truncated evaluator.
// extra widens the per-dimension half-width beyond the Gaussian estimate.
std::complex<double> naive_theta(const Characteristic& c, const CVec& v, const PeriodMatrix& Z,
                                 double eps, int extra);

} // namespace abeltheta::accept
