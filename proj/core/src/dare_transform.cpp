#include "cdare/dare_transform.hpp"

#include <sstream>
#include <string>

namespace cdare {

namespace {

void require_order(Eigen::Index n, const HermitianMatrix& x) {
    if (x.order() != n) {
        std::ostringstream os;
        os << "X has order " << x.order() << ", expected " << n;
        throw DimensionError(os.str());
    }
}

} // namespace

DareProblem transform(const CdareProblem& p) {
    const Eigen::Index n = p.n();
    const Eigen::Index m = p.m();
    const ComplexMatrix& a = p.a();
    const ComplexMatrix& b = p.b();
    const ComplexMatrix abar = a.conjugate();
    const ComplexMatrix hbar = p.h().matrix().conjugate();

    const HermitianMatrix r_h = HermitianMatrix::symmetrize(p.r().matrix() + b.adjoint() * hbar * b);
    ComplexMatrix ahat;
    try {
        ahat = abar * a - abar * b * solve_linear(r_h.matrix(), ComplexMatrix(b.adjoint() * hbar * a));
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "assumption det(R_H) != 0 is violated: R_H = R + B^H conj(H) B is singular (rcond "
           << e.rcond() << ")";
        throw AssumptionError(os.str());
    }

    ComplexMatrix bhat(n, 2 * m);
    bhat.leftCols(m) = b.conjugate();
    bhat.rightCols(m) = abar * b;

    ComplexMatrix rhat = ComplexMatrix::Zero(2 * m, 2 * m);
    rhat.topLeftCorner(m, m) = p.r().matrix().conjugate();
    rhat.bottomRightCorner(m, m) = r_h.matrix();

    const ComplexMatrix i_plus_gh = ComplexMatrix::Identity(n, n) + p.g().matrix() * hbar;
    ComplexMatrix theta_g;
    ComplexMatrix theta_a;
    try {
        ComplexMatrix rhs(n, 2 * n);
        rhs << p.g().matrix(), a;
        const ComplexMatrix sol = solve_linear(i_plus_gh, rhs);
        theta_g = sol.leftCols(n);
        theta_a = sol.rightCols(n);
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "I + G conj(H) is singular (rcond " << e.rcond() << ")";
        throw TransformError(os.str());
    }

    HermitianMatrix ghat =
        HermitianMatrix::symmetrize(p.g().matrix().conjugate() + abar * theta_g * abar.adjoint());
    HermitianMatrix hhat = HermitianMatrix::symmetrize(p.h().matrix() + a.adjoint() * hbar * theta_a);

    return {std::move(ahat), std::move(bhat), HermitianMatrix::symmetrize(rhat), std::move(ghat),
            std::move(hhat)};
}

HermitianMatrix ghat_from_blocks(const DareProblem& d) {
    return HermitianMatrix::symmetrize(
        d.bhat * solve_linear(d.rhat.matrix(), ComplexMatrix(d.bhat.adjoint())));
}

HermitianMatrix dare_apply(const DareProblem& d, const HermitianMatrix& x) {
    require_order(d.n(), x);
    const Eigen::Index n = d.n();
    const ComplexMatrix lhs = ComplexMatrix::Identity(n, n) + d.ghat.matrix() * x.matrix();
    ComplexMatrix t;
    try {
        t = solve_linear(lhs, d.ahat);
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "I + Ghat X is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
    return HermitianMatrix::symmetrize(d.ahat.adjoint() * x.matrix() * t + d.hhat.matrix());
}

HermitianMatrix double_riccati_apply(const CdareProblem& p, const HermitianMatrix& x) {
    HermitianMatrix once;
    try {
        once = riccati_apply(p, x);
    } catch (const DomainError& e) {
        throw DomainError(std::string("inner application of R failed: ") + e.what());
    }
    try {
        return riccati_apply(p, once);
    } catch (const DomainError& e) {
        throw DomainError(std::string("outer application of R failed: ") + e.what());
    }
}

HermitianMatrix rhat_x_block(const CdareProblem& p, const HermitianMatrix& x) {
    require_order(p.n(), x);
    const Eigen::Index m = p.m();
    const ComplexMatrix& a = p.a();
    const ComplexMatrix& b = p.b();
    const ComplexMatrix& xm = x.matrix();
    const ComplexMatrix abar_b = a.conjugate() * b;

    ComplexMatrix block(2 * m, 2 * m);
    block.topLeftCorner(m, m) = r_x(p, x).matrix().conjugate();
    block.topRightCorner(m, m) = b.transpose() * xm * abar_b;
    block.bottomLeftCorner(m, m) = abar_b.adjoint() * xm * b.conjugate();
    block.bottomRightCorner(m, m) =
        p.r().matrix() + b.adjoint() * (p.h().matrix().conjugate() + a.transpose() * xm * a.conjugate()) * b;
    return HermitianMatrix::symmetrize(block);
}

HermitianMatrix rhat_x(const DareProblem& d, const HermitianMatrix& x) {
    require_order(d.n(), x);
    return HermitianMatrix::symmetrize(d.rhat.matrix() + d.bhat.adjoint() * x.matrix() * d.bhat);
}

HermitianMatrix rhat_x_schur_complement(const CdareProblem& p, const HermitianMatrix& x) {
    const Eigen::Index m = p.m();
    const HermitianMatrix blk = rhat_x_block(p, x);
    const ComplexMatrix& k = blk.matrix();
    ComplexMatrix lead_inv_upper;
    try {
        lead_inv_upper = solve_linear(k.topLeftCorner(m, m), k.topRightCorner(m, m));
    } catch (const SingularMatrixError& e) {
        throw DomainError(std::string("leading block conj(R_X) is singular: ") + e.what());
    }
    return HermitianMatrix::symmetrize(k.bottomRightCorner(m, m) - k.bottomLeftCorner(m, m) * lead_inv_upper);
}

double schur_complement_residual(const CdareProblem& p, const HermitianMatrix& x) {
    const HermitianMatrix schur = rhat_x_schur_complement(p, x);
    const HermitianMatrix expected = r_x(p, riccati_apply(p, x));
    return operator_two_norm(schur - expected);
}

DareEvalCache dare_eval_cache(const DareProblem& d, const HermitianMatrix& x) {
    require_order(d.n(), x);
    const Eigen::Index n = d.n();
    HermitianMatrix rx = rhat_x(d, x);
    ComplexMatrix f;
    try {
        f = solve_linear(rx.matrix(), ComplexMatrix(d.bhat.adjoint() * x.matrix() * d.ahat));
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "Rhat_X is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
    ComplexMatrix t = d.ahat - d.bhat * f;
    ComplexMatrix t_compact;
    try {
        t_compact = solve_linear(ComplexMatrix::Identity(n, n) + d.ghat.matrix() * x.matrix(), d.ahat);
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "I + Ghat X is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
    return {x, std::move(rx), std::move(f), std::move(t), std::move(t_compact)};
}

double closed_loop_identity_residual(const CdareProblem& p, const DareProblem& d, const HermitianMatrix& x) {
    const DareEvalCache dc = dare_eval_cache(d, x);
    const EvalCache at_x = eval_cache(p, x);
    const EvalCache at_image = eval_cache(p, riccati_apply(p, x));
    return operator_two_norm(ComplexMatrix(dc.that_d_x - at_x.t_x.conjugate() * at_image.t_x));
}

double fixed_point_closed_loop_gap(const CdareProblem& p, const DareProblem& d, const HermitianMatrix& x) {
    const DareEvalCache dc = dare_eval_cache(d, x);
    const EvalCache c = eval_cache(p, x);
    return operator_two_norm(ComplexMatrix(dc.that_d_x - c.that_x));
}

double dare_normalized_residual(const DareProblem& d, const HermitianMatrix& z) {
    require_order(d.n(), z);
    const HermitianMatrix rz = rhat_x(d, z);
    ComplexMatrix f;
    try {
        f = solve_linear(rz.matrix(), ComplexMatrix(d.bhat.adjoint() * z.matrix() * d.ahat));
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "Rhat_Z is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
    const ComplexMatrix ahz = d.ahat.adjoint() * z.matrix();
    const ComplexMatrix stein_term = ahz * d.ahat;
    const ComplexMatrix correction = ahz * d.bhat * f;
    const HermitianMatrix image = HermitianMatrix::symmetrize(stein_term - correction + d.hhat.matrix());
    const double den = operator_two_norm(z) + operator_two_norm(HermitianMatrix::symmetrize(stein_term)) +
                       operator_two_norm(HermitianMatrix::symmetrize(correction)) + operator_two_norm(d.hhat);
    if (den == 0.0) {
        return 0.0;
    }
    return operator_two_norm(z - image) / den;
}

} // namespace cdare
