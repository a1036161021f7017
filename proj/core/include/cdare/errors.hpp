#pragma once

#include <stdexcept>
#include <string>

namespace cdare {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Eigensolver non-convergence and similar breakdowns.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Raised by solve_linear when the reciprocal condition estimate is below rcond_min.
class SingularMatrixError : public NumericalError {
public:
    SingularMatrixError(const std::string& what, double rcond)
        : NumericalError(what), rcond_(rcond) {}
    [[nodiscard]] double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

// A spectral-radius precondition rho(.) < 1 - stab_margin failed.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double rho)
        : Error(what), rho_(rho) {}
    [[nodiscard]] double rho() const noexcept { return rho_; }

private:
    double rho_;
};

// X is outside the domain of a Riccati operator (R_X, I + G conj(X), ... singular).
class DomainError : public Error {
public:
    using Error::Error;
};

// det(R_H) != 0 does not hold, so the CDARE cannot be transformed.
class AssumptionError : public Error {
public:
    using Error::Error;
};

// I + G conj(H) is singular; the compact hat-coefficient forms are unavailable.
class TransformError : public Error {
public:
    using Error::Error;
};

// I + G_k H_j singular inside the discrete-flow operator.
class FlowBreakdownError : public Error {
public:
    FlowBreakdownError(const std::string& what, long outer, long inner)
        : Error(what), outer_(outer), inner_(inner) {}
    [[nodiscard]] long outer() const noexcept { return outer_; }
    [[nodiscard]] long inner() const noexcept { return inner_; }

private:
    long outer_;
    long inner_;
};

// Invalid generator or configuration parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

// The scalar family has no real Hermitian solution (h strictly between h_m and h_M).
class NoSolutionError : public ParameterError {
public:
    NoSolutionError(const std::string& what, double h_m, double h_M)
        : ParameterError(what), h_m_(h_m), h_M_(h_M) {}
    [[nodiscard]] double h_m() const noexcept { return h_m_; }
    [[nodiscard]] double h_M() const noexcept { return h_M_; }

private:
    double h_m_;
    double h_M_;
};

} // namespace cdare
