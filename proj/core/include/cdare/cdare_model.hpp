#pragma once

#include "cdare/hermitian.hpp"

namespace cdare {

/// Coefficients of the conjugate discrete-time algebraic Riccati equation
///
///     X = A^H conj(X) A - A^H conj(X) B (R + B^H conj(X) B)^{-1} B^H conj(X) A + H
///
/// with A n x n, B n x m, R (m x m) nonsingular Hermitian, H (n x n) Hermitian.
/// G = B R^{-1} B^H is cached at construction.
class CdareProblem {
public:
    CdareProblem(ComplexMatrix a, ComplexMatrix b, HermitianMatrix r, HermitianMatrix h);

    [[nodiscard]] const ComplexMatrix& a() const noexcept { return a_; }
    [[nodiscard]] const ComplexMatrix& b() const noexcept { return b_; }
    [[nodiscard]] const HermitianMatrix& r() const noexcept { return r_; }
    [[nodiscard]] const HermitianMatrix& h() const noexcept { return h_; }
    [[nodiscard]] const HermitianMatrix& g() const noexcept { return g_; }
    [[nodiscard]] Eigen::Index n() const noexcept { return a_.rows(); }
    [[nodiscard]] Eigen::Index m() const noexcept { return b_.cols(); }

private:
    ComplexMatrix a_;
    ComplexMatrix b_;
    HermitianMatrix r_;
    HermitianMatrix h_;
    HermitianMatrix g_;
};

// Quantities attached to one evaluation point X.
struct EvalCache {
    HermitianMatrix x;
    HermitianMatrix r_x;   // R + B^H conj(X) B
    ComplexMatrix f_x;     // R_X^{-1} B^H conj(X) A
    ComplexMatrix t_x;     // A - B F_X
    ComplexMatrix that_x;  // conj(T_X) T_X
};

// R_X = R + B^H conj(X) B.
[[nodiscard]] HermitianMatrix r_x(const CdareProblem& p, const HermitianMatrix& x);

/// R(X) in quotient form. Throws DomainError if R_X is singular.
[[nodiscard]] HermitianMatrix riccati_apply(const CdareProblem& p, const HermitianMatrix& x);

/// R(X) = A^H conj(X) (I + G conj(X))^{-1} A + H. Throws DomainError if
/// I + G conj(X) is singular.
[[nodiscard]] HermitianMatrix riccati_apply_compact(const CdareProblem& p, const HermitianMatrix& x);

[[nodiscard]] EvalCache eval_cache(const CdareProblem& p, const HermitianMatrix& x);

// (I + G conj(X))^{-1} A, the second expression for T_X.
[[nodiscard]] ComplexMatrix closed_loop_compact(const CdareProblem& p, const HermitianMatrix& x);

// Set membership. These never throw.
[[nodiscard]] bool in_domain(const CdareProblem& p, const HermitianMatrix& x);
[[nodiscard]] bool in_P(const CdareProblem& p, const HermitianMatrix& x);
[[nodiscard]] bool in_T(const CdareProblem& p, const HermitianMatrix& x);

/// ||Z - R(Z)|| / (||Z|| + ||A^H conj(Z) A|| + ||A^H conj(Z) B R_Z^{-1} B^H conj(Z) A|| + ||H||)
/// in the operator 2-norm; 0 when the denominator vanishes.
[[nodiscard]] double normalized_residual(const CdareProblem& p, const HermitianMatrix& z);

/// Norm of (X - R(X)) - (C_{A_F}(X) - H_F + K_F(X)) for an arbitrary gain F (m x n),
/// where A_F = A - B F, H_F = H + F^H R F, K_F(X) = (F - F_X)^H R_X (F - F_X).
[[nodiscard]] double stein_identity_residual(const CdareProblem& p, const HermitianMatrix& x,
                                             const ComplexMatrix& f);

namespace detail {
// R(X) before the final symmetrization.
[[nodiscard]] ComplexMatrix riccati_apply_raw(const CdareProblem& p, const HermitianMatrix& x);
} // namespace detail

} // namespace cdare
