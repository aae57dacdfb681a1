#include "abeltheta/exact.hpp"

#include <limits>

namespace abeltheta {

std::string rat_to_string(const Rat& q) {
    const Int num = boost::multiprecision::numerator(q);
    const Int den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        const Int num(s.substr(0, slash));
        const Int den(s.substr(slash + 1));
        if (den == 0) throw Error("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw Error("cannot parse rational '" + s + "'");
    }
}

double to_double(const Rat& q) { return q.convert_to<double>(); }

std::int64_t to_int64(const Int& n) {
    if (n > std::numeric_limits<std::int64_t>::max() ||
        n < std::numeric_limits<std::int64_t>::min())
        throw OverflowError("integer out of int64 range");
    return n.convert_to<std::int64_t>();
}

QMat invert(const QMat& m) {
    const int n = m.rows();
    if (n != m.cols()) throw Error("invert: matrix not square");
    QMat a = m;
    QMat inv = QMat::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw SingularSystemError("exact matrix is singular");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const Rat p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            const Rat f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace abeltheta
