#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

#include "cdare/cdare_model.hpp"

namespace cdare {

/// Seeded source for all generated instances.
///
/// Bits come from std::mt19937_64 (bit stream fixed by the C++ standard).
/// Uniforms are (bits >> 11) * 2^-53 and Gaussians use the basic Box-Muller
/// transform on two uniforms, one normal per pair, so the stream does not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64/box-muller/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();                        // N(0, 1)
    Complex complex_normal();               // (N + iN) / sqrt(2)

private:
    std::mt19937_64 engine_;
};

[[nodiscard]] ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);
[[nodiscard]] HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng);
// Q diag(eigs) Q^H with Q unitary from a Householder QR of a complex Gaussian matrix.
[[nodiscard]] HermitianMatrix random_hermitian_with_spectrum(const Eigen::VectorXd& eigs, Rng& rng);

/// Scalar CDARE  x = |a|^2 x / (1 + g x) + h  with g = |b|^2 / r0.
/// Hermitian solutions are real, so only |a| and |b| matter.
struct ScalarFamilyParams {
    Complex a{0.6, 0.0};
    Complex b{1.0, 0.0};
    double r0 = 1.0;
    double h = 1.0;

    [[nodiscard]] double g() const { return std::norm(b) / r0; }
    // Throws ParameterError unless |a| > 0, r0 > 0 and g > 0.
    void validate() const;
};

struct ScalarOracle {
    double discriminant = 0.0;  // D = (1 - |a|^2 - g h)^2 + 4 g h
    double h_M = 0.0;           // -(1 - |a|)^2 / g
    double h_m = 0.0;           // -(1 + |a|)^2 / g
    double x_M = 0.0;
    double x_m = 0.0;
    double rho_that = 0.0;      // |a|^2 / (1 + g x_M)^2
};

/// Closed-form extremal solutions of the scalar family.
/// Throws NoSolutionError when D < 0, i.e. h_m < h < h_M.
[[nodiscard]] ScalarOracle scalar_oracle(const ScalarFamilyParams& p);

struct GeneratedProblem {
    CdareProblem problem;
    HermitianMatrix reference;  // maximal solution X_M
};

/// Embedded scalar family: A = a e1 e1^T, B = b e1, R = [r0], H random
/// Hermitian with H(0,0) = h. The trailing (n-1) block of H has eigenvalues
/// in [0.1, 2]. X_M equals H with (0,0) replaced by x_M.
/// Requires h > h_M strictly (ParameterError otherwise).
[[nodiscard]] GeneratedProblem make_example1(Eigen::Index n, const ScalarFamilyParams& p, std::uint64_t seed);

/// Critical case h = h_M: x_M = x_m = (|a| - 1) / g and rho(That_{X_M}) = 1.
[[nodiscard]] GeneratedProblem make_example2(Eigen::Index n, Complex a, Complex b, double r0,
                                             std::uint64_t seed);

enum class Regime { pd, indefinite };

[[nodiscard]] std::string_view to_string(Regime r) noexcept;

/// Complex Gaussian A (rescaled so rho(conj(A) A) <= 0.8) and B.
/// pd: R = I and H >= 0.1 I. indefinite: R a random nonsingular diagonal with
/// a negative first entry and H a random Hermitian matrix.
[[nodiscard]] CdareProblem random_problem(Eigen::Index n, Eigen::Index m, std::uint64_t seed, Regime regime);

} // namespace cdare
