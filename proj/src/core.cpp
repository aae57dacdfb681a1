#include "abeltheta/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace abeltheta {

std::vector<std::int64_t> PolarizationType::element(std::int64_t index) const {
    std::vector<std::int64_t> m(diag.size());
    for (int i = g() - 1; i >= 0; --i) {
        m[i] = index % diag[i];
        index /= diag[i];
    }
    return m;
}

std::int64_t PolarizationType::index_of(const std::vector<std::int64_t>& m) const {
    std::int64_t idx = 0;
    for (int i = 0; i < g(); ++i) {
        std::int64_t r = ((m[i] % diag[i]) + diag[i]) % diag[i];
        idx = idx * diag[i] + r;
    }
    return idx;
}

RVec PolarizationType::diag_vec() const {
    RVec v(g());
    for (int i = 0; i < g(); ++i) v[i] = static_cast<double>(diag[i]);
    return v;
}

RMat PolarizationType::matrix() const { return diag_vec().asDiagonal(); }

RMat PolarizationType::inverse_matrix() const {
    return diag_vec().cwiseInverse().asDiagonal();
}

PolarizationType validate_polarization(const std::vector<std::int64_t>& diag) {
    if (diag.empty()) throw PositivityError("polarization type must be non-empty");
    PolarizationType D;
    D.diag = diag;
    D.d = 1;
    for (size_t i = 0; i < diag.size(); ++i) {
        if (diag[i] <= 0) {
            std::ostringstream os;
            os << "polarization entry d_" << (i + 1) << " = " << diag[i] << " is not positive";
            throw PositivityError(os.str());
        }
        if (i > 0 && diag[i] % diag[i - 1] != 0) {
            std::ostringstream os;
            os << "divisibility fails: " << diag[i - 1] << " does not divide " << diag[i];
            throw DivisibilityError(os.str());
        }
        D.d *= diag[i];
    }
    return D;
}

PeriodMatrix validate_period_matrix(const CMat& Z, const PolarizationType& D) {
    const int g = D.g();
    if (Z.rows() != g || Z.cols() != g)
        throw AsymmetryError("period matrix dimension does not match polarization type");
    const double scale = std::max(1.0, Z.cwiseAbs().maxCoeff());
    const double asym = (Z - Z.transpose()).cwiseAbs().maxCoeff();
    if (asym > tolerances().sym * scale)
        throw AsymmetryError("period matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (Z.imag() + Z.imag().transpose()));
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefiniteError("Im Z is not positive definite");
    PeriodMatrix P;
    P.Z = 0.5 * (Z + Z.transpose());  // exact symmetrization within tolerance
    P.D = D;
    return P;
}

Characteristic Characteristic::zero(int g) {
    Characteristic c;
    c.c1 = RVec::Zero(g);
    c.c2 = RVec::Zero(g);
    return c;
}

bool Characteristic::is_zero(double tol) const {
    return c1.cwiseAbs().maxCoeff() <= tol && c2.cwiseAbs().maxCoeff() <= tol;
}

bool Characteristic::is_half(const PolarizationType& D, double tol) const {
    RVec a = 2.0 * (D.matrix() * c1);
    RVec b = 2.0 * c2;
    return nearly_integral(a, tol) && nearly_integral(b, tol);
}

CVec LatticeVector::value(const PeriodMatrix& Z) const {
    return Z.Z * n1.cast<std::complex<double>>() + n2.cast<std::complex<double>>();
}

LatticeVector make_lattice_vector(const Eigen::VectorXi& n1, const Eigen::VectorXi& n2,
                                  const PolarizationType& D) {
    if (n1.size() != D.g() || n2.size() != D.g())
        throw Error("lattice vector dimension mismatch");
    for (int i = 0; i < D.g(); ++i)
        if (n2[i] % D.diag[i] != 0)
            throw MembershipError("second component must lie in D Z^g");
    return LatticeVector{n1, n2};
}

Decomposition decompose_vector(const PeriodMatrix& Z, const CVec& v) {
    // v = Z v1 + v2: split into real and imaginary parts,
    //   Re v = (Re Z) v1 + v2,  Im v = (Im Z) v1.
    Eigen::PartialPivLU<RMat> lu(Z.imag());
    RVec v1 = lu.solve(v.imag());
    RVec v2 = v.real() - Z.Z.real() * v1;
    CVec rec = Z.Z * v1 + v2;
    const double scale = 1.0 + v.cwiseAbs().maxCoeff();
    if ((rec - v).cwiseAbs().maxCoeff() > 1e3 * tolerances().lin * scale)
        throw SingularSystemError("decomposition residual too large");
    return Decomposition{v1, v2};
}

FormValues forms(const PeriodMatrix& Z, const CVec& v, const CVec& w) {
    Eigen::PartialPivLU<RMat> lu(Z.imag());
    CMat Yi = lu.inverse().cast<std::complex<double>>();
    FormValues f;
    f.H = (v.transpose() * Yi * w.conjugate())(0);
    f.B = (v.transpose() * Yi * w)(0);
    Decomposition dv = decompose_vector(Z, v);
    Decomposition dw = decompose_vector(Z, w);
    f.HmB = f.H - f.B;
    f.E = dv.v1.dot(dw.v2) - dv.v2.dot(dw.v1);
    return f;
}

PeriodMatrix period_from_basis(const std::vector<CVec>& lambda, const PolarizationType& D) {
    const int g = D.g();
    if (static_cast<int>(lambda.size()) != 2 * g)
        throw DegenerateBasisError("expected 2g basis vectors");
    CMat L1(g, g), L2(g, g);
    for (int j = 0; j < g; ++j) {
        L1.col(j) = lambda[j];
        L2.col(j) = lambda[g + j];
    }
    Eigen::FullPivLU<CMat> lu(L2);
    if (!lu.isInvertible())
        throw DegenerateBasisError("last g vectors do not form a complex basis");
    CMat Z = D.matrix().cast<std::complex<double>>() * lu.solve(L1);
    return validate_period_matrix(Z, D);
}

std::vector<CVec> basis_from_period(const PeriodMatrix& Z) {
    const int g = Z.g();
    std::vector<CVec> basis;
    basis.reserve(2 * g);
    for (int j = 0; j < g; ++j) basis.push_back(Z.Z.col(j));
    for (int j = 0; j < g; ++j) {
        CVec e = CVec::Zero(g);
        e[j] = static_cast<double>(Z.D.diag[j]);
        basis.push_back(e);
    }
    return basis;
}

bool nearly_integral(double x, double tol) {
    return std::abs(x - std::round(x)) <= tol;
}

bool nearly_integral(const RVec& x, double tol) {
    for (int i = 0; i < x.size(); ++i)
        if (!nearly_integral(x[i], tol)) return false;
    return true;
}

} // namespace abeltheta
