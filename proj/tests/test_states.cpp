#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace otto;
using doctest::Approx;

namespace {

// Two-level Gibbs oracle for E = {0.6, 1.4}, beta = 2:
// p_g = 1/(1 + e^{-1.6}).
constexpr double kPg = 0.8320183851339245;
constexpr double kPe = 1.0 - kPg;

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m.diagonal() << Complex(a, 0), Complex(b, 0);
    return m;
}

} // namespace

TEST_CASE("gibbs on flat, infinite-temperature and two-level spectra") {
    const DensityMatrix flat = gibbs(ComplexMatrix::Zero(2, 2), InverseTemperature(1.7));
    CHECK((flat.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

    RandomStream rng(5);
    const ComplexMatrix h = otto_test::random_hermitian(4, rng);
    const DensityMatrix infinite = gibbs(h, InverseTemperature::unchecked(0.0));
    CHECK((infinite.matrix() - 0.25 * ComplexMatrix::Identity(4, 4)).norm() < 1e-14);

    const DensityMatrix two = gibbs(diag2(0.6, 1.4), InverseTemperature(2.0));
    CHECK(two.matrix()(0, 0).real() == Approx(kPg).epsilon(1e-12));
    CHECK(two.matrix()(1, 1).real() == Approx(kPe).epsilon(1e-12));
    CHECK(std::abs(1.0 / (1.0 + std::exp(-1.6)) - kPg) < 1e-15);
}

TEST_CASE("gibbs is invariant under uniform spectral shifts and commutes with H") {
    RandomStream rng(6);
    for (int it = 0; it < 50; ++it) {
        const ComplexMatrix h = otto_test::random_hermitian(5, rng);
        const InverseTemperature beta(rng.uniform(0.2, 2.5));
        const double c = rng.uniform(-30.0, 30.0);
        const DensityMatrix g1 = gibbs(h, beta);
        const DensityMatrix g2 =
            gibbs(ComplexMatrix(h + c * ComplexMatrix::Identity(5, 5)), beta);
        CHECK((g1.matrix() - g2.matrix()).norm() < 1e-12);
        CHECK((h * g1.matrix() - g1.matrix() * h).norm() < 1e-12);
    }
}

TEST_CASE("vn_entropy on pure, maximally mixed and two-level Gibbs states") {
    RealVector pure(2);
    pure << 1.0, 0.0;
    CHECK(vn_entropy(DensityMatrix::diagonal(pure)) == Approx(0.0).epsilon(1e-14));

    const DensityMatrix half =
        DensityMatrix::strict(0.5 * ComplexMatrix::Identity(2, 2));
    CHECK(vn_entropy(half) == Approx(std::log(2.0)).epsilon(1e-13));

    RealVector p(2);
    p << kPg, kPe;
    const double oracle = -(kPg * std::log(kPg) + kPe * std::log(kPe));
    CHECK(oracle == Approx(0.4526713246740597).epsilon(1e-14));
    CHECK(vn_entropy(DensityMatrix::diagonal(p)) == Approx(oracle).epsilon(1e-13));
}

TEST_CASE("vn_entropy is unitarily invariant and bounded by ln(dim)") {
    RandomStream rng(7);
    for (int it = 0; it < 100; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 5);
        const DensityMatrix rho = otto_test::random_density(n, rng);
        const double s = vn_entropy(rho);
        CHECK(s >= -1e-12);
        CHECK(s <= std::log(double(n)) + 1e-12);
        const ComplexMatrix u = haar_unitary(n, rng);
        const DensityMatrix rotated =
            DensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
        CHECK(vn_entropy(rotated) == Approx(s).epsilon(1e-10));
    }
}

TEST_CASE("relative entropy: zero on equal states, infinite off support") {
    RandomStream rng(8);
    const DensityMatrix rho = otto_test::random_density(4, rng);
    CHECK(std::abs(relative_entropy(rho, rho).value()) < 1e-10);

    RealVector e0(2), e1(2);
    e0 << 1.0, 0.0;
    e1 << 0.0, 1.0;
    const RelativeEntropyResult inf =
        relative_entropy(DensityMatrix::diagonal(e0), DensityMatrix::diagonal(e1));
    CHECK(inf.is_infinite());
    CHECK_THROWS_AS(inf.value(), std::domain_error);

    CHECK_THROWS_AS(
        relative_entropy(rho, otto_test::random_density(3, rng)),
        std::invalid_argument);
}

TEST_CASE("relative entropy against the scalar formula") {
    // D(I/2 || diag(p, 1-p)) = -ln 2 - ln(p(1-p)) / 2.
    const DensityMatrix half =
        DensityMatrix::strict(0.5 * ComplexMatrix::Identity(2, 2));
    RealVector p(2);
    p << kPg, kPe;
    const double oracle = -std::log(2.0) - 0.5 * std::log(kPg * kPe);
    CHECK(relative_entropy(half, DensityMatrix::diagonal(p)).value() ==
          Approx(oracle).epsilon(1e-12));
}

TEST_CASE("relative entropy invariance and Klein inequality") {
    RandomStream rng(9);
    for (int it = 0; it < 100; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 4);
        const DensityMatrix rho = otto_test::random_density(n, rng);
        const DensityMatrix sig = otto_test::random_density(n, rng);
        const double d = relative_entropy(rho, sig).value();
        CHECK(d >= -1e-10);
        const ComplexMatrix u = haar_unitary(n, rng);
        const DensityMatrix rho_u = DensityMatrix::unchecked(u * rho.matrix() * u.adjoint());
        const DensityMatrix sig_u = DensityMatrix::unchecked(u * sig.matrix() * u.adjoint());
        CHECK(relative_entropy(rho_u, sig_u).value() == Approx(d).epsilon(1e-9));
    }
}

TEST_CASE("expectation values") {
    const DensityMatrix half = DensityMatrix::strict(0.5 * ComplexMatrix::Identity(2, 2));
    CHECK(expectation(ComplexMatrix::Identity(2, 2), half) == Approx(1.0).epsilon(1e-14));

    RealVector p(2);
    p << 0.3, 0.7;
    CHECK(expectation(diag2(0.6, 1.4), DensityMatrix::diagonal(p)) ==
          Approx(0.3 * 0.6 + 0.7 * 1.4).epsilon(1e-14));

    const DensityMatrix two = gibbs(diag2(0.6, 1.4), InverseTemperature(2.0));
    CHECK(expectation(diag2(0.6, 1.4), two) ==
          Approx(0.6 * kPg + 1.4 * kPe).epsilon(1e-12));
    CHECK(0.6 * kPg + 1.4 * kPe == Approx(0.7343852918928604).epsilon(1e-15));

    // A non-Hermitian observable leaves an imaginary residue.
    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 0) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(expectation(skew, half), std::runtime_error);
    CHECK_THROWS_AS(expectation(ComplexMatrix::Identity(3, 3), half),
                    std::invalid_argument);
}

TEST_CASE("density matrix validation modes") {
    RandomStream rng(10);
    // Strict rejects trace and Hermiticity violations.
    CHECK_THROWS_AS(DensityMatrix::strict(ComplexMatrix::Identity(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix::strict(otto_test::random_ginibre(3, rng)),
                    std::invalid_argument);

    // A tiny negative eigenvalue passes strict (>= -1e-10) and is clamped
    // by lenient.
    const ComplexMatrix u = haar_unitary(3, rng);
    RealVector lam(3);
    lam << -5e-11, 0.4, 0.6 + 5e-11;
    const ComplexMatrix dirty = u * lam.asDiagonal().toDenseMatrix().cast<Complex>() *
                                u.adjoint();
    CHECK_NOTHROW(DensityMatrix::strict(dirty));
    const DensityMatrix cleaned = DensityMatrix::lenient(dirty);
    CHECK(eigh(cleaned.matrix()).eigenvalues.minCoeff() >= 0.0);
    CHECK(cleaned.matrix().trace().real() == Approx(1.0).epsilon(1e-14));

    // A clearly negative eigenvalue is rejected by both modes.
    lam << -1e-6, 0.4, 0.6 + 1e-6;
    const ComplexMatrix bad =
        u * lam.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint();
    CHECK_THROWS_AS(DensityMatrix::strict(bad), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix::lenient(bad), std::invalid_argument);
}

TEST_CASE("gibbs minimizes the free energy") {
    RandomStream rng(11);
    for (int it = 0; it < 200; ++it) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 4);
        const ComplexMatrix h = otto_test::random_hermitian(n, rng);
        const InverseTemperature beta(rng.uniform(0.3, 2.0));
        const DensityMatrix g = gibbs(h, beta);
        const DensityMatrix rho = otto_test::random_density(n, rng);
        const double f_rho = expectation(h, rho) - vn_entropy(rho) / beta.value();
        const double f_g = expectation(h, g) - vn_entropy(g) / beta.value();
        CHECK(f_rho >= f_g - 1e-10);
    }
}

TEST_CASE("inverse temperature guards") {
    CHECK_THROWS_AS(InverseTemperature(0.0), std::invalid_argument);
    CHECK_THROWS_AS(InverseTemperature(-1.0), std::invalid_argument);
    CHECK_NOTHROW(InverseTemperature::unchecked(0.0));
    CHECK_THROWS_AS(InverseTemperature::unchecked(-1.0), std::invalid_argument);
}
