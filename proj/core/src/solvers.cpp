#include "cdare/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace cdare {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

// One LU of I + G_x H_y serves all three blocks.
FlowTriple combine(const FlowTriple& x, const FlowTriple& y) {
    const Eigen::Index n = x.n();
    if (y.n() != n || x.g.order() != n || x.h.order() != n || y.g.order() != n || y.h.order() != n) {
        throw DimensionError("flow triples have inconsistent orders");
    }
    const ComplexMatrix lhs = ComplexMatrix::Identity(n, n) + x.g.matrix() * y.h.matrix();
    ComplexMatrix rhs(n, 2 * n);
    rhs << x.a, x.g.matrix();
    ComplexMatrix sol;
    try {
        sol = solve_linear(lhs, rhs);
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "flow breakdown: I + G_k H_0 is singular (rcond " << e.rcond() << ")";
        throw FlowBreakdownError(os.str(), -1, -1);
    }
    const auto delta_a = sol.leftCols(n);
    const auto delta_g = sol.rightCols(n);
    FlowTriple out;
    out.a = y.a * delta_a;
    out.g = HermitianMatrix::symmetrize(y.g.matrix() + y.a * delta_g * y.a.adjoint());
    out.h = HermitianMatrix::symmetrize(x.h.matrix() + x.a.adjoint() * y.h.matrix() * delta_a);
    return out;
}

double safe_rho(const std::function<ComplexMatrix()>& closed_loop) {
    try {
        return spectral_radius(closed_loop());
    } catch (const Error&) {
        return kNaN;
    }
}

// Shared bookkeeping of the three iteration drivers.
class Recorder {
public:
    Recorder(const SolverConfig& cfg, const HermitianMatrix& x0)
        : cfg_(cfg), start_(Clock::now()), x0_norm_(operator_two_norm(x0)) {
        report_.solution = x0;
    }

    // Returns true when iteration should stop.
    bool record(int k, const HermitianMatrix& x, double nres, double rho, const HermitianMatrix* previous) {
        IterateRecord rec;
        rec.k = k;
        rec.nres = nres;
        rec.rho_that = rho;
        rec.min_eig_step_diff = kNaN;
        if (previous != nullptr) {
            rec.min_eig_step_diff = min_eigenvalue(*previous - x);
            const double bound = -cfg_.mono_tol * std::max(1.0, operator_two_norm(*previous));
            if (cfg_.monotonicity_check && rec.min_eig_step_diff < bound) {
                report_.monotone = false;
            }
        }
        rec.elapsed_s = std::chrono::duration<double>(Clock::now() - start_).count();
        report_.iterates.push_back(rec);
        report_.solution = x;

        if (nres <= cfg_.nres_tol) {
            report_.status = SolveStatus::converged;
            return true;
        }
        if (k == 0 || nres < 0.99 * best_) {
            best_ = std::min(best_, nres);
            stall_ = 0;
        } else if (++stall_ >= cfg_.stagnation_window) {
            report_.status = SolveStatus::stagnated;
            std::ostringstream os;
            os << "NRes did not improve by 1% over " << cfg_.stagnation_window << " iterations";
            report_.message = os.str();
            return true;
        }
        return false;
    }

    // Divergence guard; returns true (and sets the failure) when tripped.
    bool diverged(int k, const HermitianMatrix& x) {
        if (!all_finite(x.matrix())) {
            fail(SolveStatus::domain_failure, k, "iterate has non-finite entries");
            return true;
        }
        if (operator_two_norm(x) > cfg_.divergence_factor * (1.0 + x0_norm_)) {
            fail(SolveStatus::domain_failure, k, "iterate norm exceeded the divergence guard");
            return true;
        }
        return false;
    }

    void fail(SolveStatus s, int k, std::string message, int l = -1) {
        report_.status = s;
        report_.failure_k = k;
        report_.failure_l = l;
        report_.message = std::move(message);
    }

    SolveReport finish() {
        if (report_.status == SolveStatus::max_iters && report_.message.empty()) {
            report_.message = "iteration limit reached";
        }
        report_.wall_time = Clock::now() - start_;
        return std::move(report_);
    }

private:
    const SolverConfig& cfg_;
    Clock::time_point start_;
    double x0_norm_;
    double best_ = std::numeric_limits<double>::infinity();
    int stall_ = 0;
    SolveReport report_;
};

SolveReport drive_cdare(const CdareProblem& p, const HermitianMatrix& x0, const SolverConfig& cfg,
                        const std::function<HermitianMatrix(const HermitianMatrix&)>& step) {
    cfg.validate();
    if (x0.order() != p.n()) {
        throw DimensionError("initial iterate order does not match the problem");
    }
    Recorder rec(cfg, x0);
    const auto rho_of = [&](const HermitianMatrix& x) {
        return safe_rho([&] { return eval_cache(p, x).that_x; });
    };

    double nres0 = 0.0;
    try {
        nres0 = normalized_residual(p, x0);
    } catch (const DomainError& e) {
        rec.fail(SolveStatus::domain_failure, 0, e.what());
        return rec.finish();
    }
    if (rec.record(0, x0, nres0, rho_of(x0), nullptr)) {
        return rec.finish();
    }
    HermitianMatrix x = x0;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        HermitianMatrix next;
        double nres = 0.0;
        try {
            next = step(x);
            if (rec.diverged(k, next)) {
                break;
            }
            nres = normalized_residual(p, next);
        } catch (const DomainError& e) {
            rec.fail(SolveStatus::domain_failure, k, e.what());
            break;
        }
        const bool stop = rec.record(k, next, nres, rho_of(next), &x);
        x = std::move(next);
        if (stop) {
            break;
        }
    }
    return rec.finish();
}

} // namespace

void SolverConfig::validate() const {
    if (!(nres_tol > 0.0)) {
        throw ParameterError("nres_tol must be positive");
    }
    if (max_iters < 1) {
        throw ParameterError("max_iters must be at least 1");
    }
    if (r < 2) {
        throw ParameterError("acceleration order r must be at least 2");
    }
    if (stagnation_window < 1) {
        throw ParameterError("stagnation_window must be at least 1");
    }
}

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max-iters";
    case SolveStatus::stagnated: return "stagnated";
    case SolveStatus::domain_failure: return "domain-failure";
    case SolveStatus::flow_breakdown: return "flow-breakdown";
    case SolveStatus::recovery_failure: return "recovery-failure";
    }
    return "unknown";
}

FlowTriple initial_flow_triple(const DareProblem& d) {
    return {d.ahat, d.ghat, d.hhat};
}

FlowTriple flow_step(const FlowTriple& x_k, const FlowTriple& x_0) {
    return combine(x_k, x_0);
}

FlowTriple flow_compose_r(const FlowTriple& x, int r) {
    if (r < 1) {
        throw ParameterError("flow_compose_r needs r >= 1");
    }
    FlowTriple acc = x;
    for (int l = 1; l < r; ++l) {
        try {
            acc = combine(x, acc);
        } catch (const FlowBreakdownError& e) {
            throw FlowBreakdownError(e.what(), -1, l);
        }
    }
    return acc;
}

HermitianMatrix flow_recover(const FlowTriple& x_k, const HermitianMatrix& y) {
    const Eigen::Index n = x_k.n();
    if (y.order() != n) {
        throw DimensionError("recovery point order does not match the flow triple");
    }
    ComplexMatrix t;
    try {
        t = solve_linear(ComplexMatrix::Identity(n, n) + x_k.g.matrix() * y.matrix(), x_k.a);
    } catch (const SingularMatrixError& e) {
        std::ostringstream os;
        os << "I + G_k Y_0 is singular (rcond " << e.rcond() << ")";
        throw DomainError(os.str());
    }
    return HermitianMatrix::symmetrize(x_k.h.matrix() + x_k.a.adjoint() * y.matrix() * t);
}

SolveReport fpi_solve(const CdareProblem& p, const HermitianMatrix& x0, const SolverConfig& cfg) {
    return drive_cdare(p, x0, cfg, [&](const HermitianMatrix& x) { return riccati_apply(p, x); });
}

SolveReport fpi_hat_solve(const CdareProblem& p, const HermitianMatrix& y0, const SolverConfig& cfg) {
    return drive_cdare(p, y0, cfg, [&](const HermitianMatrix& y) { return double_riccati_apply(p, y); });
}

SolveReport afpi_solve(const DareProblem& d, const HermitianMatrix& y0, const SolverConfig& cfg,
                       const CdareProblem* original) {
    cfg.validate();
    if (y0.order() != d.n()) {
        throw DimensionError("initial iterate order does not match the problem");
    }
    if (original != nullptr && original->n() != d.n()) {
        throw DimensionError("original CDARE order does not match the DARE");
    }
    Recorder rec(cfg, y0);
    const auto nres_of = [&](const HermitianMatrix& y) {
        return original != nullptr ? normalized_residual(*original, y) : dare_normalized_residual(d, y);
    };
    const auto rho_of = [&](const HermitianMatrix& y) {
        if (original != nullptr) {
            return safe_rho([&] { return eval_cache(*original, y).that_x; });
        }
        return safe_rho([&] { return dare_eval_cache(d, y).that_d_x; });
    };

    double nres0 = 0.0;
    try {
        nres0 = nres_of(y0);
    } catch (const DomainError& e) {
        rec.fail(SolveStatus::domain_failure, 0, e.what());
        return rec.finish();
    }
    if (rec.record(0, y0, nres0, rho_of(y0), nullptr)) {
        return rec.finish();
    }

    FlowTriple bold = initial_flow_triple(d);
    HermitianMatrix y = y0;
    for (int k = 0; k < cfg.max_iters; ++k) {
        // Inner loop l = 1..r-2 followed by the advance to index k+1; every
        // update is F(bold_k, X^{(l)}), i.e. one more composition with bold_k.
        FlowTriple current = bold;
        int l = 1;
        try {
            for (; l <= cfg.r - 2; ++l) {
                current = combine(bold, current);
            }
            l = cfg.r - 1;
            bold = combine(bold, current);
        } catch (const FlowBreakdownError& e) {
            rec.fail(SolveStatus::flow_breakdown, k, e.what(), l);
            break;
        }

        HermitianMatrix next;
        double nres = 0.0;
        try {
            next = flow_recover(bold, y0);
        } catch (const DomainError& e) {
            rec.fail(SolveStatus::recovery_failure, k + 1, e.what());
            break;
        }
        if (rec.diverged(k + 1, next)) {
            break;
        }
        try {
            nres = nres_of(next);
        } catch (const DomainError& e) {
            rec.fail(SolveStatus::domain_failure, k + 1, e.what());
            break;
        }
        const bool stop = rec.record(k + 1, next, nres, rho_of(next), &y);
        y = std::move(next);
        if (stop) {
            break;
        }
    }
    return rec.finish();
}

HermitianMatrix make_initial(const CdareProblem& p, const ComplexMatrix& f, double shift) {
    if (f.rows() != p.m() || f.cols() != p.n()) {
        throw DimensionError("gain F must be m x n");
    }
    if (!(shift >= 0.0)) {
        throw ParameterError("shift must be nonnegative");
    }
    const ComplexMatrix a_f = p.a() - p.b() * f;
    const double rho = spectral_radius(ComplexMatrix(a_f.conjugate() * a_f));
    if (rho >= 1.0 - tol::stab_margin) {
        std::ostringstream os;
        os << "cannot build X0: rho(conj(A - B F) (A - B F)) = " << rho
           << " is not below 1; supply a stabilizing gain F";
        throw StabilityError(os.str(), rho);
    }
    const Eigen::Index n = p.n();
    const ComplexMatrix q = p.h().matrix() + f.adjoint() * p.r().matrix() * f +
                            shift * ComplexMatrix::Identity(n, n);
    return solve_conjugate_stein(a_f, HermitianMatrix::symmetrize(q));
}

HermitianMatrix make_initial_auto(const CdareProblem& p, const std::optional<ComplexMatrix>& fallback_f,
                                  double shift) {
    try {
        return make_initial(p, ComplexMatrix::Zero(p.m(), p.n()), shift);
    } catch (const StabilityError&) {
        if (!fallback_f) {
            throw;
        }
    }
    return make_initial(p, *fallback_f, shift);
}

} // namespace cdare
