#include "cdare/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace cdare {

namespace {

std::string shape(const ComplexMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

} // namespace

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double hermitian_tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("Hermitian matrix must be square, got " + shape(m));
    }
    if (!all_finite(m)) {
        throw NumericalError("Hermitian matrix has non-finite entries");
    }
    const double asym = operator_two_norm(ComplexMatrix(m - m.adjoint()));
    const double scale = std::max(1.0, operator_two_norm(m));
    if (asym > hermitian_tol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian: ||M - M^H|| = " << asym << " exceeds " << hermitian_tol
           << " * " << scale;
        throw NumericalError(os.str());
    }
    m_ = symmetrize(m).m_;
}

HermitianMatrix HermitianMatrix::symmetrize(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("cannot symmetrize a non-square matrix " + shape(m));
    }
    ComplexMatrix s = 0.5 * (m + m.adjoint());
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        s(i, i) = Complex(s(i, i).real(), 0.0);
    }
    // Mirror the strict upper triangle so s == s^H holds exactly.
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < s.rows(); ++i) {
            s(i, j) = std::conj(s(j, i));
        }
    }
    return {std::move(s), Unchecked{}};
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index order) {
    return {ComplexMatrix::Zero(order, order), Unchecked{}};
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index order) {
    return {ComplexMatrix::Identity(order, order), Unchecked{}};
}

HermitianMatrix HermitianMatrix::conjugate() const {
    return {m_.conjugate(), Unchecked{}};
}

HermitianMatrix operator+(const HermitianMatrix& x, const HermitianMatrix& y) {
    if (x.order() != y.order()) {
        throw DimensionError("order mismatch in Hermitian sum");
    }
    return HermitianMatrix::symmetrize(x.m_ + y.m_);
}

HermitianMatrix operator-(const HermitianMatrix& x, const HermitianMatrix& y) {
    if (x.order() != y.order()) {
        throw DimensionError("order mismatch in Hermitian difference");
    }
    return HermitianMatrix::symmetrize(x.m_ - y.m_);
}

HermitianMatrix operator*(double s, const HermitianMatrix& x) {
    return HermitianMatrix::symmetrize(s * x.m_);
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    return m.conjugate();
}

double spectral_radius(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("spectral radius needs a square matrix, got " + shape(m));
    }
    if (m.rows() == 0) {
        return 0.0;
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("complex eigensolver did not converge");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_two_norm(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

double operator_two_norm(const HermitianMatrix& m) {
    if (m.order() == 0) {
        return 0.0;
    }
    return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const HermitianMatrix& m) {
    if (m.order() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge");
    }
    return es.eigenvalues();
}

double min_eigenvalue(const HermitianMatrix& m) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(m);
    if (ev.size() == 0) {
        throw DimensionError("min_eigenvalue of an empty matrix");
    }
    return ev(0);
}

bool is_positive_definite(const HermitianMatrix& m, double tol) {
    if (m.order() == 0) {
        return true;
    }
    const Eigen::VectorXd ev = hermitian_eigenvalues(m);
    const double norm = ev.cwiseAbs().maxCoeff();
    return ev(0) > tol * std::max(1.0, norm);
}

double rcond_estimate(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("rcond needs a square matrix, got " + shape(m));
    }
    if (m.rows() == 0) {
        return 1.0;
    }
    if (!all_finite(m)) {
        return 0.0;
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    // An exact zero pivot makes the estimator divide by zero.
    const auto& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        if (packed(i, i) == Complex(0.0, 0.0)) {
            return 0.0;
        }
    }
    const double rc = lu.rcond();
    return std::isfinite(rc) ? rc : 0.0;
}

ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs, double rcond_min) {
    if (m.rows() != m.cols()) {
        throw DimensionError("solve_linear needs a square matrix, got " + shape(m));
    }
    if (rhs.rows() != m.rows()) {
        throw DimensionError("right-hand side " + shape(rhs) + " does not match " + shape(m));
    }
    if (m.rows() == 0) {
        return ComplexMatrix(0, rhs.cols());
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    double rc = 0.0;
    const auto& packed = lu.matrixLU();
    bool zero_pivot = false;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        zero_pivot = zero_pivot || packed(i, i) == Complex(0.0, 0.0);
    }
    if (!zero_pivot) {
        rc = lu.rcond();
    }
    if (!(rc >= rcond_min)) {
        std::ostringstream os;
        os << "matrix is singular to working precision (rcond estimate " << rc << " < " << rcond_min
           << ")";
        throw SingularMatrixError(os.str(), std::isfinite(rc) ? rc : 0.0);
    }
    return lu.solve(rhs);
}

namespace {

void require_stable(const ComplexMatrix& c, const char* what) {
    if (c.rows() != c.cols()) {
        throw DimensionError(std::string(what) + " needs a square coefficient, got " + shape(c));
    }
    const double rho = spectral_radius(c);
    if (rho >= 1.0 - tol::stab_margin) {
        std::ostringstream os;
        os << what << ": spectral radius " << rho << " is not below 1 - " << tol::stab_margin;
        throw StabilityError(os.str(), rho);
    }
}

} // namespace

HermitianMatrix solve_stein_kronecker(const ComplexMatrix& c, const HermitianMatrix& q) {
    const Eigen::Index n = c.rows();
    if (q.order() != n) {
        throw DimensionError("Stein right-hand side order does not match coefficient");
    }
    if (n == 0) {
        return q;
    }
    // Column-major vec(C^H X C) = (C^T kron C^H) vec(X).
    const ComplexMatrix ct = c.transpose();
    const ComplexMatrix ch = c.adjoint();
    const Eigen::Index nn = n * n;
    ComplexMatrix system = ComplexMatrix::Identity(nn, nn);
    for (Eigen::Index bj = 0; bj < n; ++bj) {
        for (Eigen::Index bi = 0; bi < n; ++bi) {
            system.block(bi * n, bj * n, n, n) -= ct(bi, bj) * ch;
        }
    }
    const Eigen::Map<const Eigen::VectorXcd> rhs(q.matrix().data(), nn);
    ComplexMatrix vec_x;
    try {
        vec_x = solve_linear(system, rhs);
    } catch (const SingularMatrixError& e) {
        throw NumericalError(std::string("Kronecker Stein system is singular: ") + e.what());
    }
    return HermitianMatrix::symmetrize(Eigen::Map<const ComplexMatrix>(vec_x.data(), n, n));
}

HermitianMatrix solve_stein_smith(const ComplexMatrix& c, const HermitianMatrix& q) {
    const Eigen::Index n = c.rows();
    if (q.order() != n) {
        throw DimensionError("Stein right-hand side order does not match coefficient");
    }
    // X_{j+1} = X_j + C_j^H X_j C_j, C_{j+1} = C_j^2 accumulates 2^j terms of the series.
    ComplexMatrix x = q.matrix();
    ComplexMatrix power = c;
    for (int j = 0; j < 128; ++j) {
        const ComplexMatrix increment = power.adjoint() * x * power;
        x += increment;
        power = power * power;
        const double inc = increment.cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        if (inc <= 1e-17 * scale && power.cwiseAbs().maxCoeff() <= 1e-17) {
            return HermitianMatrix::symmetrize(x);
        }
        if (!all_finite(x)) {
            break;
        }
    }
    throw NumericalError("Smith iteration for the Stein equation did not converge");
}

HermitianMatrix solve_stein(const ComplexMatrix& c, const HermitianMatrix& q) {
    require_stable(c, "solve_stein");
    if (c.rows() <= kron_stein_max_order) {
        return solve_stein_kronecker(c, q);
    }
    return solve_stein_smith(c, q);
}

HermitianMatrix solve_conjugate_stein(const ComplexMatrix& a, const HermitianMatrix& q) {
    if (a.rows() != a.cols() || q.order() != a.rows()) {
        throw DimensionError("solve_conjugate_stein: inconsistent shapes");
    }
    const ComplexMatrix two_step = a.conjugate() * a;
    require_stable(two_step, "solve_conjugate_stein");
    const ComplexMatrix rhs = q.matrix() + a.adjoint() * q.matrix().conjugate() * a;
    return solve_stein(two_step, HermitianMatrix::symmetrize(rhs));
}

} // namespace cdare
