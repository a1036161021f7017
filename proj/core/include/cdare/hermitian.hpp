#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "cdare/errors.hpp"

namespace cdare {

using Complex = std::complex<double>;

// Dense complex matrix, column-major storage. Empty shapes are permitted
// (an m = 0 control space produces n x 0 input matrices).
using ComplexMatrix = Eigen::MatrixXcd;

namespace tol {
inline constexpr double hermitian = 1e-12;   // relative asymmetry accepted at construction
inline constexpr double rcond_min = 1e-13;   // below this a linear system is singular
inline constexpr double stab_margin = 1e-8;  // rho(.) < 1 - stab_margin
inline constexpr double pd = 1e-12;          // relative lambda_min margin for M > 0
} // namespace tol

/// Square complex matrix with M == M^H holding bit-exactly.
///
/// Built either from data that is already Hermitian up to tol::hermitian
/// (checked, otherwise DimensionError/NumericalError), or by explicit
/// symmetrization of a computed result. The stored value is always
/// (M + M^H) / 2 with real diagonal.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    // Throws if M is not square, has non-finite entries, or is not Hermitian
    // to hermitian_tol * max(1, ||M||).
    explicit HermitianMatrix(const ComplexMatrix& m, double hermitian_tol = tol::hermitian);

    // (M + M^H) / 2 without a tolerance check. For images of Riccati-type
    // operators whose asymmetry is pure rounding.
    [[nodiscard]] static HermitianMatrix symmetrize(const ComplexMatrix& m);

    [[nodiscard]] static HermitianMatrix zero(Eigen::Index order);
    [[nodiscard]] static HermitianMatrix identity(Eigen::Index order);

    [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index order() const noexcept { return m_.rows(); }
    [[nodiscard]] Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    [[nodiscard]] HermitianMatrix conjugate() const;

    friend HermitianMatrix operator+(const HermitianMatrix& x, const HermitianMatrix& y);
    friend HermitianMatrix operator-(const HermitianMatrix& x, const HermitianMatrix& y);
    friend HermitianMatrix operator*(double s, const HermitianMatrix& x);

    friend bool operator==(const HermitianMatrix& x, const HermitianMatrix& y) {
        return x.m_.rows() == y.m_.rows() && x.m_ == y.m_;
    }

private:
    struct Unchecked {};
    HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

[[nodiscard]] bool all_finite(const ComplexMatrix& m);

// Entrywise complex conjugate.
[[nodiscard]] ComplexMatrix conjugate(const ComplexMatrix& m);

// max |lambda| over the spectrum, via a dense complex Schur decomposition.
[[nodiscard]] double spectral_radius(const ComplexMatrix& m);

// Largest singular value. Zero for empty matrices.
[[nodiscard]] double operator_two_norm(const ComplexMatrix& m);
[[nodiscard]] double operator_two_norm(const HermitianMatrix& m);

// Ascending real eigenvalues.
[[nodiscard]] Eigen::VectorXd hermitian_eigenvalues(const HermitianMatrix& m);
[[nodiscard]] double min_eigenvalue(const HermitianMatrix& m);

// True iff lambda_min(M) > tol * max(1, ||M||_2).
[[nodiscard]] bool is_positive_definite(const HermitianMatrix& m, double tol = tol::pd);

// Reciprocal condition estimate (1-norm) from a partial-pivot LU; 0 for
// exactly singular input, 1 for the empty matrix.
[[nodiscard]] double rcond_estimate(const ComplexMatrix& m);

/// Solves M Z = RHS with a partial-pivot LU.
///
/// Throws DimensionError on shape mismatch and SingularMatrixError when the
/// reciprocal condition estimate falls below rcond_min.
[[nodiscard]] ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs,
                                         double rcond_min = tol::rcond_min);

// Order n above which solve_stein switches from Kronecker vectorization to
// the squared Smith series.
inline constexpr Eigen::Index kron_stein_max_order = 16;

/// Unique X with X - C^H X C = Q, for rho(C) < 1 - stab_margin.
[[nodiscard]] HermitianMatrix solve_stein(const ComplexMatrix& c, const HermitianMatrix& q);

// The two solution routes, exposed for cross-checking.
[[nodiscard]] HermitianMatrix solve_stein_kronecker(const ComplexMatrix& c, const HermitianMatrix& q);
[[nodiscard]] HermitianMatrix solve_stein_smith(const ComplexMatrix& c, const HermitianMatrix& q);

/// Unique X with X - A^H conj(X) A = Q, for rho(conj(A) A) < 1 - stab_margin.
///
/// Reduces to X - (conj(A) A)^H X (conj(A) A) = Q + A^H conj(Q) A.
[[nodiscard]] HermitianMatrix solve_conjugate_stein(const ComplexMatrix& a, const HermitianMatrix& q);

} // namespace cdare
