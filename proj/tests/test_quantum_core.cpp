#include <doctest.h>

#include <random>

#include "qdmnp/quantum_core.hpp"
#include "support.hpp"

using namespace qdmnp;

TEST_CASE("Hilbert space layout") {
    const HilbertSpace s(5);
    CHECK(s.dim() == 12);
    CHECK(s.fock_dim() == 6);
    CHECK(s.index(0, 1) == 1);
    CHECK(s.index(3, 0) == 6);
    CHECK_THROWS_AS(HilbertSpace(0), DimensionError);
}

TEST_CASE("ladder operator entries") {
    const int n_max = 6;
    const Matrix a = fock_annihilation<double>(n_max);
    for (int i = 0; i <= n_max; ++i) {
        for (int j = 0; j <= n_max; ++j) {
            const Complex expected = (i == j - 1) ? std::sqrt(static_cast<double>(j)) : 0.0;
            CHECK(a(i, j) == expected);
        }
    }
    const Matrix s = two_level_lowering<double>();
    CHECK(s(0, 1) == Complex(1.0));
    CHECK((s * s).isZero(0.0));
}

TEST_CASE("commutators on the truncated space") {
    const HilbertSpace space(5);
    const auto ops = build_system_operators<double>(space);
    const Matrix comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
    for (int n = 0; n <= space.n_max; ++n) {
        for (int m = 0; m < 2; ++m) {
            const int i = space.index(n, m);
            CHECK(comm(i, i).real() == doctest::Approx(n < space.n_max ? 1.0 : -space.n_max));
        }
    }
    CHECK((ops.a * ops.sigma - ops.sigma * ops.a).isZero(0.0));
    CHECK((ops.sigma * ops.sigma).isZero(0.0));
}

TEST_CASE("number and excited-state operators") {
    const HilbertSpace space(4);
    const auto ops = build_system_operators<double>(space);
    CHECK(ops.number.isApprox(ops.a_dag * ops.a));
    CHECK(ops.excited.isApprox(ops.sigma_dag * ops.sigma));
    for (int n = 0; n <= space.n_max; ++n) {
        for (int m = 0; m < 2; ++m) {
            const int i = space.index(n, m);
            CHECK(std::abs(ops.number(i, i) - Complex(n)) < 1e-14);
            CHECK(ops.excited(i, i) == Complex(m));
        }
    }
    CHECK((ops.excited * ops.excited - ops.excited).isZero(0.0));
}

TEST_CASE("expectation values on simple states") {
    const HilbertSpace space(3);
    const auto ops = build_system_operators<double>(space);
    CHECK(expectation(basis_state<double>(space, 0, 0), ops.excited) == Complex(0.0));
    CHECK(expectation(basis_state<double>(space, 0, 1), ops.excited) == Complex(1.0));
    Vector psi = Vector::Zero(space.dim());
    psi(space.index(0, 0)) = psi(space.index(0, 1)) = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(expectation(projector(psi), ops.sigma) - 0.5) < 1e-15);
}

TEST_CASE("expectation equals the trace of the product") {
    std::mt19937_64 rng(5);
    const Matrix rho = test::random_density(8, rng);
    const Matrix op = test::random_matrix(8, rng);
    CHECK(std::abs(expectation(rho, op) - (op * rho).trace()) < 1e-12);
    CHECK_THROWS_AS(expectation(rho, Matrix::Identity(6, 6)), DimensionError);
}

TEST_CASE("density matrix diagnostics") {
    Matrix thermal = Matrix::Zero(6, 6);
    double z = 0.0;
    for (int k = 0; k < 6; ++k) z += std::exp(-0.5 * k);
    for (int k = 0; k < 6; ++k) thermal(k, k) = std::exp(-0.5 * k) / z;
    const auto d = validate_density_matrix(thermal);
    CHECK(d.hermiticity_defect < 1e-14);
    CHECK(d.trace_defect < 1e-14);
    CHECK(d.min_eigenvalue > -1e-14);
    CHECK(d.valid());

    const auto half = validate_density_matrix((0.5 * thermal).eval());
    CHECK_FALSE(half.normalized());
    CHECK_FALSE(half.valid());

    std::mt19937_64 rng(11);
    Vector psi(6);
    std::normal_distribution<double> n;
    for (int k = 0; k < 6; ++k) psi(k) = Complex(n(rng), n(rng));
    psi.normalize();
    const auto pure = validate_density_matrix(projector(psi));
    CHECK(std::abs(pure.min_eigenvalue) < 1e-12);
    CHECK(pure.positive());

    Matrix bad = thermal;
    bad(0, 1) = Complex(0.1, 0.0);
    CHECK_FALSE(validate_density_matrix(bad).hermitian());
}

TEST_CASE("single precision instantiation") {
    const HilbertSpace space(2);
    const auto ops = build_system_operators<float>(space);
    CHECK(ops.a.rows() == 6);
    CHECK(ops.number(4, 4).real() == doctest::Approx(2.0f));
}
