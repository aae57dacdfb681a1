#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "abeltheta/errors.hpp"

namespace abeltheta {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Small dense matrices over an exact scalar.  Row-major storage; only the
// operations the symplectic machinery needs.
template <class T>
class ExactMat {
public:
    ExactMat() = default;
    ExactMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static ExactMat identity(int n) {
        ExactMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static ExactMat zero(int rows, int cols) { return ExactMat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    ExactMat operator*(const ExactMat& o) const {
        ExactMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    ExactMat operator+(const ExactMat& o) const {
        ExactMat r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
        return r;
    }
    ExactMat operator-(const ExactMat& o) const {
        ExactMat r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }
    ExactMat operator-() const {
        ExactMat r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
        return r;
    }
    bool operator==(const ExactMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    ExactMat transpose() const {
        ExactMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    ExactMat block(int i0, int j0, int r, int c) const {
        ExactMat out(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
        return out;
    }
    void set_block(int i0, int j0, const ExactMat& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) (*this)(i0 + i, j0 + j) = m(i, j);
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    const std::vector<T>& raw() const { return data_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IMat = ExactMat<Int>;
using QMat = ExactMat<Rat>;

inline QMat to_rational(const IMat& m) {
    QMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

inline bool is_integral(const QMat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (boost::multiprecision::denominator(m(i, j)) != 1) return false;
    return true;
}

inline IMat to_integral(const QMat& m) {
    IMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (boost::multiprecision::denominator(m(i, j)) != 1)
                throw NonIntegralError("matrix entry is not an integer");
            r(i, j) = boost::multiprecision::numerator(m(i, j));
        }
    return r;
}

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

double to_double(const Rat& q);
std::int64_t to_int64(const Int& n);

// Exact rational Gaussian elimination; throws SingularSystemError.
QMat invert(const QMat& m);

} // namespace abeltheta
