#include "cdare/cdare_model.hpp"

#include <sstream>

namespace cdare {

namespace {

void require_order(const CdareProblem& p, const HermitianMatrix& x) {
    if (x.order() != p.n()) {
        std::ostringstream os;
        os << "X has order " << x.order() << ", problem has n = " << p.n();
        throw DimensionError(os.str());
    }
}

// R_X^{-1} B^H conj(X) A, raising DomainError for singular R_X.
ComplexMatrix feedback_gain(const CdareProblem& p, const ComplexMatrix& xbar, const HermitianMatrix& rx) {
    try {
        return solve_linear(rx.matrix(), p.b().adjoint() * xbar * p.a());
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "X is outside dom(R): det(R_X) ~ 0 (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
}

} // namespace

CdareProblem::CdareProblem(ComplexMatrix a, ComplexMatrix b, HermitianMatrix r, HermitianMatrix h)
    : a_(std::move(a)), b_(std::move(b)), r_(std::move(r)), h_(std::move(h)) {
    const Eigen::Index n = a_.rows();
    if (n < 1 || a_.cols() != n) {
        throw DimensionError("A must be square with n >= 1");
    }
    if (b_.rows() != n) {
        throw DimensionError("B must have n rows");
    }
    if (r_.order() != b_.cols()) {
        throw DimensionError("R must be m x m where m is the column count of B");
    }
    if (h_.order() != n) {
        throw DimensionError("H must be n x n");
    }
    if (!all_finite(a_) || !all_finite(b_)) {
        throw NumericalError("problem coefficients must be finite");
    }
    try {
        g_ = HermitianMatrix::symmetrize(b_ * solve_linear(r_.matrix(), ComplexMatrix(b_.adjoint())));
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "R must be nonsingular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
}

HermitianMatrix r_x(const CdareProblem& p, const HermitianMatrix& x) {
    require_order(p, x);
    return HermitianMatrix::symmetrize(p.r().matrix() + p.b().adjoint() * x.matrix().conjugate() * p.b());
}

namespace detail {

ComplexMatrix riccati_apply_raw(const CdareProblem& p, const HermitianMatrix& x) {
    const HermitianMatrix rx = r_x(p, x);
    const ComplexMatrix xbar = x.matrix().conjugate();
    const ComplexMatrix f = feedback_gain(p, xbar, rx);
    const ComplexMatrix ahx = p.a().adjoint() * xbar;
    return ahx * p.a() - ahx * p.b() * f + p.h().matrix();
}

} // namespace detail

HermitianMatrix riccati_apply(const CdareProblem& p, const HermitianMatrix& x) {
    return HermitianMatrix::symmetrize(detail::riccati_apply_raw(p, x));
}

ComplexMatrix closed_loop_compact(const CdareProblem& p, const HermitianMatrix& x) {
    require_order(p, x);
    const ComplexMatrix lhs =
        ComplexMatrix::Identity(p.n(), p.n()) + p.g().matrix() * x.matrix().conjugate();
    try {
        return solve_linear(lhs, p.a());
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "I + G conj(X) is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
}

HermitianMatrix riccati_apply_compact(const CdareProblem& p, const HermitianMatrix& x) {
    const ComplexMatrix t = closed_loop_compact(p, x);
    return HermitianMatrix::symmetrize(p.a().adjoint() * x.matrix().conjugate() * t + p.h().matrix());
}

EvalCache eval_cache(const CdareProblem& p, const HermitianMatrix& x) {
    HermitianMatrix rx = r_x(p, x);
    const ComplexMatrix xbar = x.matrix().conjugate();
    ComplexMatrix f = feedback_gain(p, xbar, rx);
    ComplexMatrix t = p.a() - p.b() * f;
    ComplexMatrix that = t.conjugate() * t;
    return {x, std::move(rx), std::move(f), std::move(t), std::move(that)};
}

bool in_domain(const CdareProblem& p, const HermitianMatrix& x) {
    if (x.order() != p.n() || !all_finite(x.matrix())) {
        return false;
    }
    return rcond_estimate(r_x(p, x).matrix()) >= tol::rcond_min;
}

bool in_P(const CdareProblem& p, const HermitianMatrix& x) {
    if (!in_domain(p, x)) {
        return false;
    }
    try {
        return is_positive_definite(r_x(p, x), tol::pd);
    } catch (const Error&) {
        return false;
    }
}

bool in_T(const CdareProblem& p, const HermitianMatrix& x) {
    if (!in_domain(p, x)) {
        return false;
    }
    try {
        return spectral_radius(eval_cache(p, x).that_x) < 1.0;
    } catch (const Error&) {
        return false;
    }
}

double normalized_residual(const CdareProblem& p, const HermitianMatrix& z) {
    const HermitianMatrix rz = r_x(p, z);
    const ComplexMatrix zbar = z.matrix().conjugate();
    const ComplexMatrix f = feedback_gain(p, zbar, rz);
    const ComplexMatrix ahz = p.a().adjoint() * zbar;
    const ComplexMatrix stein_term = ahz * p.a();
    const ComplexMatrix correction = ahz * p.b() * f;
    const HermitianMatrix image = HermitianMatrix::symmetrize(stein_term - correction + p.h().matrix());

    const double num = operator_two_norm(z - image);
    const double den = operator_two_norm(z) + operator_two_norm(HermitianMatrix::symmetrize(stein_term)) +
                       operator_two_norm(HermitianMatrix::symmetrize(correction)) + operator_two_norm(p.h());
    if (den == 0.0) {
        return 0.0;
    }
    return num / den;
}

double stein_identity_residual(const CdareProblem& p, const HermitianMatrix& x, const ComplexMatrix& f) {
    if (f.rows() != p.m() || f.cols() != p.n()) {
        throw DimensionError("gain F must be m x n");
    }
    const EvalCache c = eval_cache(p, x);
    const ComplexMatrix lhs = x.matrix() - riccati_apply(p, x).matrix();

    const ComplexMatrix a_f = p.a() - p.b() * f;
    const ComplexMatrix conj_stein = x.matrix() - a_f.adjoint() * x.matrix().conjugate() * a_f;
    const ComplexMatrix h_f = p.h().matrix() + f.adjoint() * p.r().matrix() * f;
    const ComplexMatrix gap = f - c.f_x;
    const ComplexMatrix k_f = gap.adjoint() * c.r_x.matrix() * gap;

    return operator_two_norm(ComplexMatrix(lhs - (conj_stein - h_f + k_f)));
}

} // namespace cdare
