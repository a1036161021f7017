#include <gtest/gtest.h>

#include <cmath>

#include "cdare/cdare.hpp"
#include "oracles.hpp"

namespace cdare {
namespace {

using oracle::hscalar;
using oracle::rel_diff;
using oracle::scalar_problem;

TEST(FlowStep, InitialTripleRecoversOneApplication) {
    Rng rng(50);
    const CdareProblem p = random_problem(4, 2, 50, Regime::pd);
    const DareProblem d = transform(p);
    const HermitianMatrix y = HermitianMatrix::identity(4);
    EXPECT_LE(rel_diff(flow_recover(initial_flow_triple(d), y), dare_apply(d, y)), 1e-13);
}

TEST(FlowStep, ScalarHandComputed) {
    // Scalar triples (a, g, h): with a_0 = a_k = 1, g = h = 1, D = 1/2.
    FlowTriple x{oracle::scalar(1.0), hscalar(1.0), hscalar(1.0)};
    const FlowTriple y = flow_step(x, x);
    EXPECT_NEAR(y.a(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(y.g(0, 0).real(), 1.5, 1e-15);
    EXPECT_NEAR(y.h(0, 0).real(), 1.5, 1e-15);
}

TEST(FlowStep, BreakdownIsReported) {
    FlowTriple x{oracle::scalar(1.0), hscalar(1.0), hscalar(-1.0)};
    EXPECT_THROW((void)flow_step(x, x), FlowBreakdownError);
    try {
        (void)flow_compose_r(x, 3);
        FAIL() << "expected FlowBreakdownError";
    } catch (const FlowBreakdownError& e) {
        EXPECT_EQ(e.inner(), 1);
    }
    EXPECT_THROW((void)flow_compose_r(x, 0), ParameterError);
}

// H_k + A_k^H Y (I + G_k Y)^{-1} A_k = R_d applied k+1 times, checked
// against repeated dare_apply for the first few flow elements.
TEST(FlowStep, RecoveryMatchesRepeatedApplication) {
    for (int trial = 0; trial < 10; ++trial) {
        const CdareProblem p = random_problem(2 + trial % 4, 1 + trial % 2, 5100 + trial, Regime::pd);
        const DareProblem d = transform(p);
        const FlowTriple x0 = initial_flow_triple(d);
        const HermitianMatrix y = HermitianMatrix::identity(p.n());
        FlowTriple xk = x0;
        for (long k = 0; k < 6; ++k) {
            const HermitianMatrix expected = oracle::dare_power(d, y, k + 1);
            EXPECT_LE(rel_diff(flow_recover(xk, y), expected), 1e-11) << "trial " << trial << " k " << k;
            xk = flow_step(xk, x0);
        }
        for (int r : {1, 2, 3, 5}) {
            EXPECT_LE(rel_diff(flow_recover(flow_compose_r(x0, r), y), oracle::dare_power(d, y, r)), 1e-11);
        }
    }
}

TEST(SolverConfig, Validation) {
    SolverConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.r = 1;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = {};
    cfg.max_iters = 0;
    EXPECT_THROW(cfg.validate(), ParameterError);
    cfg = {};
    cfg.nres_tol = 0.0;
    EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(SolveStatus, Names) {
    EXPECT_EQ(to_string(SolveStatus::converged), "converged");
    EXPECT_EQ(to_string(SolveStatus::max_iters), "max-iters");
    EXPECT_EQ(to_string(SolveStatus::stagnated), "stagnated");
    EXPECT_EQ(to_string(SolveStatus::domain_failure), "domain-failure");
    EXPECT_EQ(to_string(SolveStatus::flow_breakdown), "flow-breakdown");
    EXPECT_EQ(to_string(SolveStatus::recovery_failure), "recovery-failure");
}

TEST(MakeInitial, ScalarAndEmbedded) {
    // X0 = h / (1 - |a|^2) for F = 0.
    EXPECT_NEAR(make_initial_auto(scalar_problem())(0, 0).real(), 1.0 / 0.64, 1e-15);
    const GeneratedProblem gp = make_example1(5, ScalarFamilyParams{}, 52);
    const HermitianMatrix x0 = make_initial_auto(gp.problem);
    EXPECT_NEAR(x0(0, 0).real(), 1.0 / 0.64, 1e-14);
    EXPECT_LE(rel_diff(ComplexMatrix(x0.matrix().bottomRightCorner(4, 4)),
                       ComplexMatrix(gp.problem.h().matrix().bottomRightCorner(4, 4))),
              1e-14);
}

TEST(MakeInitial, UnstableNeedsGain) {
    const CdareProblem p = scalar_problem(1.5, 1.0, 1.0, 1.0);
    EXPECT_THROW((void)make_initial_auto(p), StabilityError);
    // A - B F = 0.5 with F = 1.
    const HermitianMatrix x0 = make_initial_auto(p, oracle::scalar(1.0));
    EXPECT_NEAR(x0(0, 0).real(), 2.0 / 0.75, 1e-14);
    EXPECT_THROW((void)make_initial(p, ComplexMatrix::Zero(2, 1)), DimensionError);
}

TEST(MakeInitial, DominatesImage) {
    // X0 - R(X0) is positive semidefinite for pd problems.
    for (int trial = 0; trial < 30; ++trial) {
        const CdareProblem p = random_problem(1 + trial % 6, 1 + trial % 3, 5300 + trial, Regime::pd);
        const HermitianMatrix x0 = make_initial_auto(p);
        const double gap = min_eigenvalue(x0 - riccati_apply(p, x0));
        EXPECT_GE(gap, -1e-12 * std::max(1.0, operator_two_norm(x0))) << "trial " << trial;
    }
}

TEST(FpiSolve, ScalarConvergesToMaximalRoot) {
    const CdareProblem p = scalar_problem();
    const SolveReport rep = fpi_solve(p, make_initial_auto(p));
    ASSERT_EQ(rep.status, SolveStatus::converged);
    EXPECT_NEAR(rep.solution(0, 0).real(), oracle::scalar_max_root(0.36, 1.0, 1.0), 1e-14);
    EXPECT_TRUE(rep.monotone);
    EXPECT_EQ(rep.iterates.front().k, 0);
    EXPECT_TRUE(std::isnan(rep.iterates.front().min_eig_step_diff));
    for (std::size_t i = 1; i < rep.iterates.size(); ++i) {
        EXPECT_EQ(rep.iterates[i].k, static_cast<int>(i));
        EXPECT_GE(rep.iterates[i].min_eig_step_diff, -1e-14);
    }
}

TEST(FpiSolve, EmbeddedProblemLinearRate) {
    const GeneratedProblem gp = make_example1(12, ScalarFamilyParams{}, 53);
    const SolveReport rep = fpi_solve(gp.problem, make_initial_auto(gp.problem));
    ASSERT_EQ(rep.status, SolveStatus::converged);
    EXPECT_LE(rel_diff(rep.solution, gp.reference), 1e-13);
    const double rho = scalar_oracle(ScalarFamilyParams{}).rho_that;
    EXPECT_NEAR(rep.iterates.back().rho_that, rho, 1e-12);
    // Early error ratios track rho(That_{X_M}).
    for (std::size_t i = 2; i < rep.iterates.size(); ++i) {
        if (rep.iterates[i].nres < 1e-12) {
            break;
        }
        EXPECT_NEAR(rep.iterates[i].nres / rep.iterates[i - 1].nres, rho, 0.02) << "k " << i;
    }
}

TEST(FpiSolve, StatusPaths) {
    const CdareProblem p = scalar_problem();
    SolverConfig cfg;
    cfg.max_iters = 2;
    const SolveReport capped = fpi_solve(p, make_initial_auto(p), cfg);
    EXPECT_EQ(capped.status, SolveStatus::max_iters);
    EXPECT_EQ(capped.iterations(), 2);

    const SolveReport bad = fpi_solve(p, hscalar(-1.0));
    EXPECT_EQ(bad.status, SolveStatus::domain_failure);
    EXPECT_EQ(bad.failure_k, 0);

    // a = 0, h = -1: X_1 = -1 is produced, but NRes(X_1) needs R(X_1).
    const SolveReport later = fpi_solve(scalar_problem(0.0, 1.0, 1.0, -1.0), hscalar(0.0));
    EXPECT_EQ(later.status, SolveStatus::domain_failure);
    EXPECT_EQ(later.failure_k, 1);

    EXPECT_THROW((void)fpi_solve(p, HermitianMatrix::zero(2)), DimensionError);
}

TEST(FpiSolve, StagnationStops) {
    // Critical case converges sublinearly; a tight window trips the detector.
    const GeneratedProblem gp = make_example2(3, 0.6, 1.0, 1.0, 54);
    SolverConfig cfg;
    cfg.max_iters = 100000;
    cfg.stagnation_window = 1;
    const SolveReport rep = fpi_solve(gp.problem, make_initial_auto(gp.problem), cfg);
    EXPECT_EQ(rep.status, SolveStatus::stagnated);
    EXPECT_FALSE(rep.message.empty());
}

TEST(FpiHatSolve, MatchesEvenFpiIterates) {
    const GeneratedProblem gp = make_example1(6, ScalarFamilyParams{}, 55);
    const HermitianMatrix x0 = make_initial_auto(gp.problem);
    SolverConfig cfg;
    cfg.max_iters = 3;
    const SolveReport hat = fpi_hat_solve(gp.problem, x0, cfg);
    ASSERT_EQ(hat.iterations(), 3);
    EXPECT_LE(rel_diff(hat.solution, oracle::riccati_power(gp.problem, x0, 6)), 1e-14);
    const SolveReport full = fpi_hat_solve(gp.problem, x0);
    EXPECT_EQ(full.status, SolveStatus::converged);
    EXPECT_LE(rel_diff(full.solution, gp.reference), 1e-13);
}

TEST(AfpiSolve, IteratesArePowersOfDareOperator) {
    const GeneratedProblem gp = make_example1(4, ScalarFamilyParams{0.9, 1.0, 1.0, 0.5}, 56);
    const DareProblem d = transform(gp.problem);
    const HermitianMatrix y0 = make_initial_auto(gp.problem);
    for (int r : {2, 3, 4}) {
        SolverConfig cfg;
        cfg.r = r;
        cfg.max_iters = 2;
        const SolveReport rep = afpi_solve(d, y0, cfg, &gp.problem);
        ASSERT_EQ(rep.iterations(), 2) << to_string(rep.status);
        EXPECT_LE(rel_diff(rep.solution, oracle::dare_power(d, y0, static_cast<long>(r) * r)), 1e-12) << r;
    }
}

TEST(AfpiSolve, ConvergesOnEmbeddedProblem) {
    const GeneratedProblem gp = make_example1(10, ScalarFamilyParams{}, 57);
    const DareProblem d = transform(gp.problem);
    const HermitianMatrix y0 = make_initial_auto(gp.problem);
    const SolveReport rep = afpi_solve(d, y0, {}, &gp.problem);
    ASSERT_EQ(rep.status, SolveStatus::converged);
    EXPECT_LE(rep.iterations(), 4);
    EXPECT_LE(rel_diff(rep.solution, gp.reference), 1e-13);
    EXPECT_TRUE(rep.monotone);

    // Measured on the DARE instead of the CDARE.
    const SolveReport own = afpi_solve(d, y0);
    EXPECT_EQ(own.status, SolveStatus::converged);
    EXPECT_LE(rel_diff(own.solution, gp.reference), 1e-13);
}

TEST(AfpiSolve, CriticalCaseHigherOrderNeedsFewerSteps) {
    const GeneratedProblem gp = make_example2(8, 0.6, 1.0, 1.0, 58);
    const DareProblem d = transform(gp.problem);
    const HermitianMatrix y0 = make_initial_auto(gp.problem);
    int previous = 1000;
    for (int r : {2, 5, 9, 100}) {
        SolverConfig cfg;
        cfg.r = r;
        const SolveReport rep = afpi_solve(d, y0, cfg, &gp.problem);
        ASSERT_EQ(rep.status, SolveStatus::converged) << "r " << r << " " << rep.message;
        EXPECT_LE(rep.iterations(), previous) << "r " << r;
        previous = rep.iterations();
        EXPECT_NEAR(rep.solution(0, 0).real(), -0.4, 1e-6);
    }
    EXPECT_LE(previous, 5);
}

TEST(AfpiSolve, BreakdownCarriesIndices) {
    // Hhat = -1, Ghat = 1 makes I + G_0 H_0 singular at the first composition.
    DareProblem d;
    d.ahat = oracle::scalar(1.0);
    d.bhat = oracle::scalar(1.0);
    d.rhat = hscalar(1.0);
    d.ghat = hscalar(1.0);
    d.hhat = hscalar(-1.0);
    SolverConfig cfg;
    cfg.r = 4;
    const SolveReport rep = afpi_solve(d, hscalar(0.0), cfg);
    EXPECT_EQ(rep.status, SolveStatus::flow_breakdown);
    EXPECT_EQ(rep.failure_k, 0);
    EXPECT_EQ(rep.failure_l, 1);
}

TEST(AfpiSolve, RecoveryFailure) {
    // Flow stays regular but I + G_1 Y_0 is singular for Y_0 = -1 / G_1.
    DareProblem d;
    d.ahat = oracle::scalar(0.5);
    d.bhat = oracle::scalar(1.0);
    d.rhat = hscalar(1.0);
    d.ghat = hscalar(1.0);
    d.hhat = hscalar(1.0);
    const FlowTriple x1 = flow_compose_r(initial_flow_triple(d), 2);
    const HermitianMatrix y0 = hscalar(-1.0 / x1.g(0, 0).real());
    const SolveReport rep = afpi_solve(d, y0);
    // Y_0 itself lies outside the DARE domain only if 1 + Ghat Y_0 = 0; G_1 != Ghat here.
    EXPECT_EQ(rep.status, SolveStatus::recovery_failure) << rep.message;
    EXPECT_EQ(rep.failure_k, 1);
}

} // namespace
} // namespace cdare
