#include "cdare/benchgen.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cdare {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::numbers::sqrt2;
}

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    // Row-major fill so the stream order matches the file layout.
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = rng.complex_normal();
        }
    }
    return m;
}

HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng) {
    return HermitianMatrix::symmetrize(random_complex(n, n, rng));
}

HermitianMatrix random_hermitian_with_spectrum(const Eigen::VectorXd& eigs, Rng& rng) {
    const Eigen::Index n = eigs.size();
    if (n == 0) {
        return HermitianMatrix::zero(0);
    }
    const ComplexMatrix g = random_complex(n, n, rng);
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ() * ComplexMatrix::Identity(n, n);
    return HermitianMatrix::symmetrize(q * eigs.cast<Complex>().asDiagonal() * q.adjoint());
}

void ScalarFamilyParams::validate() const {
    if (!(std::abs(a) > 0.0)) {
        throw ParameterError("scalar family needs |a| > 0");
    }
    if (!(r0 > 0.0)) {
        throw ParameterError("scalar family needs r0 > 0");
    }
    if (!(g() > 0.0)) {
        throw ParameterError("scalar family needs g = |b|^2 / r0 > 0");
    }
    if (!std::isfinite(h)) {
        throw ParameterError("scalar family needs a finite h");
    }
}

ScalarOracle scalar_oracle(const ScalarFamilyParams& p) {
    p.validate();
    const double abs_a = std::abs(p.a);
    const double a2 = abs_a * abs_a;
    const double g = p.g();
    const double h = p.h;

    ScalarOracle o;
    o.h_M = -(1.0 - abs_a) * (1.0 - abs_a) / g;
    o.h_m = -(1.0 + abs_a) * (1.0 + abs_a) / g;
    const double lin = 1.0 - a2 - g * h;
    double d = lin * lin + 4.0 * g * h;
    const double scale = lin * lin + std::abs(4.0 * g * h);
    if (d < 0.0 && d >= -64.0 * std::numeric_limits<double>::epsilon() * scale) {
        d = 0.0;
    }
    if (d < 0.0) {
        std::ostringstream os;
        os << "no real Hermitian solution: h = " << h << " lies in (h_m, h_M) = (" << o.h_m << ", "
           << o.h_M << ")";
        throw NoSolutionError(os.str(), o.h_m, o.h_M);
    }
    o.discriminant = d;
    const double root = std::sqrt(d);
    o.x_M = (-lin + root) / (2.0 * g);
    o.x_m = (-lin - root) / (2.0 * g);
    const double denom = 1.0 + g * o.x_M;
    o.rho_that = a2 / (denom * denom);
    return o;
}

namespace {

GeneratedProblem embed_scalar(Eigen::Index n, Complex a, Complex b, double r0, double h, double x_M,
                              std::uint64_t seed) {
    if (n < 1) {
        throw ParameterError("n must be at least 1");
    }
    Rng rng(seed);
    ComplexMatrix am = ComplexMatrix::Zero(n, n);
    am(0, 0) = a;
    ComplexMatrix bm = ComplexMatrix::Zero(n, 1);
    bm(0, 0) = b;

    ComplexMatrix hm = ComplexMatrix::Zero(n, n);
    if (n > 1) {
        Eigen::VectorXd eigs(n - 1);
        for (Eigen::Index i = 0; i < n - 1; ++i) {
            eigs(i) = rng.uniform(0.1, 2.0);
        }
        hm.bottomRightCorner(n - 1, n - 1) = random_hermitian_with_spectrum(eigs, rng).matrix();
        for (Eigen::Index j = 1; j < n; ++j) {
            hm(0, j) = rng.complex_normal();
            hm(j, 0) = std::conj(hm(0, j));
        }
    }
    hm(0, 0) = h;
    HermitianMatrix hh(hm);
    ComplexMatrix xm = hh.matrix();
    xm(0, 0) = x_M;

    ComplexMatrix rm(1, 1);
    rm(0, 0) = r0;
    return {CdareProblem(std::move(am), std::move(bm), HermitianMatrix(rm), std::move(hh)), HermitianMatrix(xm)};
}

} // namespace

GeneratedProblem make_example1(Eigen::Index n, const ScalarFamilyParams& p, std::uint64_t seed) {
    p.validate();
    const double abs_a = std::abs(p.a);
    const double h_M = -(1.0 - abs_a) * (1.0 - abs_a) / p.g();
    if (!(p.h > h_M)) {
        std::ostringstream os;
        os << "example1 needs h > h_M = " << h_M << " (no real solution for h in ("
           << -(1.0 + abs_a) * (1.0 + abs_a) / p.g() << ", " << h_M << "))";
        throw ParameterError(os.str());
    }
    const ScalarOracle o = scalar_oracle(p);
    return embed_scalar(n, p.a, p.b, p.r0, p.h, o.x_M, seed);
}

GeneratedProblem make_example2(Eigen::Index n, Complex a, Complex b, double r0, std::uint64_t seed) {
    ScalarFamilyParams p{a, b, r0, 0.0};
    p.validate();
    const double abs_a = std::abs(a);
    const double g = p.g();
    const double h_M = -(1.0 - abs_a) * (1.0 - abs_a) / g;
    return embed_scalar(n, a, b, r0, h_M, (abs_a - 1.0) / g, seed);
}

std::string_view to_string(Regime r) noexcept {
    return r == Regime::pd ? "pd" : "indefinite";
}

CdareProblem random_problem(Eigen::Index n, Eigen::Index m, std::uint64_t seed, Regime regime) {
    if (n < 1 || m < 1) {
        throw ParameterError("random_problem needs n, m >= 1");
    }
    Rng rng(seed);
    ComplexMatrix a = random_complex(n, n, rng);
    const double rho = spectral_radius(ComplexMatrix(a.conjugate() * a));
    if (rho > 0.8) {
        a *= std::sqrt(0.8 / rho);
    }
    ComplexMatrix b = random_complex(n, m, rng);

    ComplexMatrix r = ComplexMatrix::Identity(m, m);
    if (regime == Regime::indefinite) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double mag = rng.uniform(0.5, 2.0);
            const bool negative = i == 0 || rng.uniform() < 0.5;
            r(i, i) = negative ? -mag : mag;
        }
    }

    HermitianMatrix h = random_hermitian(n, rng);
    if (regime == Regime::pd) {
        const double shift = std::max(0.0, -min_eigenvalue(h)) + 0.1;
        h = HermitianMatrix::symmetrize(h.matrix() + shift * ComplexMatrix::Identity(n, n));
    }
    return CdareProblem(std::move(a), std::move(b), HermitianMatrix(r), std::move(h));
}

} // namespace cdare
