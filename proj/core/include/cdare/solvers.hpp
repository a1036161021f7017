#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdare/dare_transform.hpp"

namespace cdare {

/// Element (A_k, G_k, H_k) of the discrete flow driven by F.
struct FlowTriple {
    ComplexMatrix a;
    HermitianMatrix g;
    HermitianMatrix h;

    [[nodiscard]] Eigen::Index n() const noexcept { return a.rows(); }
};

// (Ahat, Ghat, Hhat), the starting element of the flow.
[[nodiscard]] FlowTriple initial_flow_triple(const DareProblem& d);

/// The binary flow operator F(X_k, X_0):
///
///     A = A_0 D A_k,  G = G_0 + A_0 D G_k A_0^H,  H = H_k + A_k^H H_0 D A_k,
///     D = (I + G_k H_0)^{-1}.
///
/// Throws FlowBreakdownError if I + G_k H_0 is singular.
[[nodiscard]] FlowTriple flow_step(const FlowTriple& x_k, const FlowTriple& x_0);

// F_1(X) = X, F_{l+1}(X) = F(X, F_l(X)). Breakdown carries the inner index l.
[[nodiscard]] FlowTriple flow_compose_r(const FlowTriple& x, int r);

// H_k + A_k^H Y (I + G_k Y)^{-1} A_k, which equals R_d^{(k+1)}(Y) for X_k of the flow.
[[nodiscard]] HermitianMatrix flow_recover(const FlowTriple& x_k, const HermitianMatrix& y);

struct SolverConfig {
    double nres_tol = 1e-15;
    int max_iters = 100;
    int r = 2;                      // AFPI order, r >= 2
    bool monotonicity_check = true;
    int stagnation_window = 5;
    double mono_tol = 1e-10;        // relative slack on lambda_min(X_k - X_{k+1})
    double divergence_factor = 1e12;

    // Throws ParameterError when a field is out of range.
    void validate() const;
};

enum class SolveStatus {
    converged,
    max_iters,
    stagnated,
    domain_failure,
    flow_breakdown,
    recovery_failure,
};

[[nodiscard]] std::string_view to_string(SolveStatus s) noexcept;

struct IterateRecord {
    int k = 0;
    double nres = 0.0;
    double rho_that = 0.0;            // rho(That_{X_k}); NaN if unavailable
    double min_eig_step_diff = 0.0;   // lambda_min(X_{k-1} - X_k); NaN at k = 0
    double elapsed_s = 0.0;
};

struct SolveReport {
    std::vector<IterateRecord> iterates;
    SolveStatus status = SolveStatus::max_iters;
    HermitianMatrix solution;
    std::chrono::duration<double> wall_time{};
    // Set by the monotonicity diagnostic; true when no step violated the bound.
    bool monotone = true;
    // Iteration index of a failure, and (for AFPI breakdowns) the inner index.
    int failure_k = -1;
    int failure_l = -1;
    std::string message;

    [[nodiscard]] int iterations() const noexcept {
        return iterates.empty() ? 0 : iterates.back().k;
    }
    [[nodiscard]] double final_nres() const noexcept {
        return iterates.empty() ? 0.0 : iterates.back().nres;
    }
};

/// Plain fixed-point iteration X_{k+1} = R(X_k).
[[nodiscard]] SolveReport fpi_solve(const CdareProblem& p, const HermitianMatrix& x0,
                                    const SolverConfig& cfg = {});

/// Y_{k+1} = R(R(Y_k)); the iterates are X_{2k} of fpi_solve.
[[nodiscard]] SolveReport fpi_hat_solve(const CdareProblem& p, const HermitianMatrix& y0,
                                        const SolverConfig& cfg = {});

/// Accelerated fixed-point iteration of order cfg.r on the DARE, so that
/// the k-th iterate equals R_d applied r^k times to Y_0.
///
/// When `original` is given, NRes and rho(That) are measured against the CDARE;
/// otherwise against the DARE (rho of That^D).
[[nodiscard]] SolveReport afpi_solve(const DareProblem& d, const HermitianMatrix& y0,
                                     const SolverConfig& cfg = {},
                                     const CdareProblem* original = nullptr);

/// X_0 = C_{A_F}^{-1}(H + F^H R F + shift I) with A_F = A - B F, which lies in S_>=.
/// Throws StabilityError when rho(conj(A_F) A_F) is not below 1.
[[nodiscard]] HermitianMatrix make_initial(const CdareProblem& p, const ComplexMatrix& f, double shift = 0.0);

// make_initial with F = 0, retrying with `fallback_f` when rho(conj(A) A) >= 1.
[[nodiscard]] HermitianMatrix make_initial_auto(const CdareProblem& p,
                                                const std::optional<ComplexMatrix>& fallback_f = std::nullopt,
                                                double shift = 0.0);

} // namespace cdare
