#pragma once

#include "cdare/cdare_model.hpp"

namespace cdare {

/// Standard DARE  X = Ahat^H X (I + Ghat X)^{-1} Ahat + Hhat  obtained by
/// composing the conjugate Riccati operator with itself.
///
/// Ahat = conj(A) A - conj(A) B R_H^{-1} B^H conj(H) A,  Bhat = [conj(B), conj(A) B],
/// Rhat = conj(R) (+) R_H,  Ghat = conj(G) + conj(A) (I + G conj(H))^{-1} G conj(A)^H,
/// Hhat = H + A^H conj(H) (I + G conj(H))^{-1} A,  with R_H = R + B^H conj(H) B.
struct DareProblem {
    ComplexMatrix ahat;    // n x n
    ComplexMatrix bhat;    // n x 2m
    HermitianMatrix rhat;  // 2m x 2m
    HermitianMatrix ghat;  // n x n
    HermitianMatrix hhat;  // n x n

    [[nodiscard]] Eigen::Index n() const noexcept { return ahat.rows(); }
};

struct DareEvalCache {
    HermitianMatrix x;
    HermitianMatrix rhat_x;          // Rhat + Bhat^H X Bhat
    ComplexMatrix fhat_x;            // Rhat_X^{-1} Bhat^H X Ahat
    ComplexMatrix that_d_x;          // Ahat - Bhat Fhat_X
    ComplexMatrix that_d_x_compact;  // (I + Ghat X)^{-1} Ahat
};

/// Builds the hat coefficients. Throws AssumptionError when det(R_H) != 0
/// fails and TransformError when I + G conj(H) is singular.
[[nodiscard]] DareProblem transform(const CdareProblem& p);

// Bhat Rhat^{-1} Bhat^H, the block expression for Ghat.
[[nodiscard]] HermitianMatrix ghat_from_blocks(const DareProblem& d);

/// R_d(X) = Ahat^H X (I + Ghat X)^{-1} Ahat + Hhat. Throws DomainError when
/// I + Ghat X is singular.
[[nodiscard]] HermitianMatrix dare_apply(const DareProblem& d, const HermitianMatrix& x);

/// R(R(X)). DomainError messages name the failing (inner/outer) application.
[[nodiscard]] HermitianMatrix double_riccati_apply(const CdareProblem& p, const HermitianMatrix& x);

/// Rhat_X assembled blockwise from the CDARE data:
///
///     [ conj(R_X)                  B^T X conj(A) B              ]
///     [ B^H A^T X conj(B)          R + B^H (conj(H) + A^T X conj(A)) B ]
///
/// Equal to Rhat + Bhat^H X Bhat.
[[nodiscard]] HermitianMatrix rhat_x_block(const CdareProblem& p, const HermitianMatrix& x);

// Rhat + Bhat^H X Bhat from the DARE coefficients.
[[nodiscard]] HermitianMatrix rhat_x(const DareProblem& d, const HermitianMatrix& x);

/// Schur complement of the leading m x m block in rhat_x_block(p, X).
/// Equals R + B^H conj(R(X)) B for every X in dom(R), hence R_X at fixed points.
[[nodiscard]] HermitianMatrix rhat_x_schur_complement(const CdareProblem& p, const HermitianMatrix& x);

// || Schur complement - R_{R(X)} ||.
[[nodiscard]] double schur_complement_residual(const CdareProblem& p, const HermitianMatrix& x);

[[nodiscard]] DareEvalCache dare_eval_cache(const DareProblem& d, const HermitianMatrix& x);

/// || That^D_X - conj(T_X) T_{R(X)} ||, zero in exact arithmetic for X in dom(R).
[[nodiscard]] double closed_loop_identity_residual(const CdareProblem& p, const DareProblem& d,
                                                   const HermitianMatrix& x);

/// || That^D_X - conj(T_X) T_X ||; vanishes at solutions of the CDARE.
[[nodiscard]] double fixed_point_closed_loop_gap(const CdareProblem& p, const DareProblem& d,
                                                 const HermitianMatrix& x);

/// NRes measured against the DARE:
/// ||Z - R_d(Z)|| / (||Z|| + ||Ahat^H Z Ahat|| + ||Ahat^H Z Bhat Rhat_Z^{-1} Bhat^H Z Ahat|| + ||Hhat||).
[[nodiscard]] double dare_normalized_residual(const DareProblem& d, const HermitianMatrix& z);

} // namespace cdare
