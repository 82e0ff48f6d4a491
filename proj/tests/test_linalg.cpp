#include <doctest.h>

#include <numbers>

#include "chanfid/errors.hpp"
#include "chanfid/linalg.hpp"
#include "chanfid/random.hpp"
#include "oracles.hpp"

using namespace chanfid;

TEST_CASE("kron matches the index-loop definition") {
    Rng rng(1);
    const auto a = rng.gaussian_matrix(2, 3), b = rng.gaussian_matrix(3, 2);
    CHECK(max_abs(kron(a, b) - oracle::kron(a, b)) == 0.0);
    CHECK(max_abs(kron_power(a.topLeftCorner(2, 2), 3) -
                  oracle::kron(a.topLeftCorner(2, 2), oracle::kron(a.topLeftCorner(2, 2), a.topLeftCorner(2, 2)))) <
          1e-14);
}

TEST_CASE("vectorize is row-major and devectorize inverts it") {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ComplexVector phi(4);
    phi << 1.0, 0.0, 0.0, 1.0;
    CHECK(max_abs(vectorize(id) - phi) == 0.0);

    Rng rng(2);
    const auto a = rng.gaussian_matrix(3, 2);
    CHECK(max_abs(vectorize(a) - oracle::vec(a)) == 0.0);
    CHECK(max_abs(devectorize(vectorize(a), 3, 2) - a) == 0.0);
    CHECK_THROWS_AS(devectorize(vectorize(a), 2, 2), DimensionError);
}

TEST_CASE("Hilbert-Schmidt inner product is <<A|B>>") {
    Rng rng(3);
    const auto a = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(3, 3);
    CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
    CHECK(std::abs(hs_inner(a, b) - vectorize(a).dot(vectorize(b))) < 1e-12);
}

TEST_CASE("double-ket identities on random triples") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index dp = 2 + trial % 2, d = 2 + (trial / 2) % 2;
        const auto a = rng.gaussian_matrix(dp, dp), b = rng.gaussian_matrix(d, d);
        const auto c = rng.gaussian_matrix(dp, d);
        CHECK(max_abs(kron(a, b) * vectorize(c) - vectorize(a * c * b.transpose())) < 1e-10);

        const auto x = rng.gaussian_matrix(dp, d), y = rng.gaussian_matrix(dp, d);
        const ComplexMatrix op = vectorize(x) * vectorize(y).adjoint();
        const SubsystemShape shape{static_cast<std::size_t>(dp), static_cast<std::size_t>(d)};
        CHECK(max_abs(partial_trace(op, shape, {0}) - x * y.adjoint()) < 1e-10);
        CHECK(max_abs(partial_trace(op, shape, {1}) - x.transpose() * y.conjugate()) < 1e-10);
    }
}

TEST_CASE("partial trace agrees with the loop oracle and on three factors") {
    Rng rng(5);
    const auto m = rng.gaussian_matrix(6, 6);
    CHECK(max_abs(partial_trace(m, {2, 3}, {0}) - oracle::trace_second(m, 2, 3)) < 1e-13);
    CHECK(max_abs(partial_trace(m, {2, 3}, {1}) - oracle::trace_first(m, 2, 3)) < 1e-13);

    const auto a = rng.gaussian_matrix(2, 2), b = rng.gaussian_matrix(3, 3), c = rng.gaussian_matrix(2, 2);
    const auto abc = kron(kron(a, b), c);
    CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {0, 2}) - b.trace() * kron(a, c)) < 1e-12);
    CHECK(max_abs(partial_trace(abc, {2, 3, 2}, {}) - ComplexMatrix::Constant(1, 1, abc.trace())) < 1e-12);
    CHECK_THROWS_AS(partial_trace(m, {2, 2}, {0}), DimensionError);
    CHECK_THROWS_AS(partial_trace(m, {2, 3}, {3}), DimensionError);
}

TEST_CASE("permute_subsystems reorders tensor factors") {
    Rng rng(6);
    const auto a = rng.gaussian_matrix(2, 2), b = rng.gaussian_matrix(3, 3), c = rng.gaussian_matrix(2, 2);
    const auto abc = kron(kron(a, b), c);
    CHECK(max_abs(permute_subsystems(abc, {2, 3, 2}, {2, 0, 1}) - kron(kron(c, a), b)) < 1e-13);
    CHECK(max_abs(permute_subsystems(abc, {2, 3, 2}, {0, 1, 2}) - abc) == 0.0);
    CHECK_THROWS_AS(permute_subsystems(abc, {2, 3, 2}, {0, 0, 1}), DimensionError);
}

TEST_CASE("Hermitian kernels") {
    Rng rng(7);
    const ComplexMatrix g = rng.gaussian_matrix(4, 4);
    const ComplexMatrix h = (g + g.adjoint()) / 2.0;
    const auto eig = herm_eig(h);
    CHECK(max_abs(eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint() - h) < 1e-12);
    for (Eigen::Index i = 1; i < eig.values.size(); ++i) CHECK(eig.values(i - 1) <= eig.values(i));

    const ComplexMatrix p = g * g.adjoint();
    const auto r = psd_sqrt(p);
    CHECK(max_abs(r * r - p) < 1e-11);
    CHECK(max_abs(psd_inverse_sqrt(p) * r - ComplexMatrix::Identity(4, 4)) < 1e-9);
    CHECK_THROWS_AS(psd_sqrt(h - 10.0 * ComplexMatrix::Identity(4, 4)), InvalidInputError);

    CHECK(trace_norm(h) == doctest::Approx(oracle::hermitian_trace_norm(h)).epsilon(1e-12));
    CHECK(trace_norm(g) == doctest::Approx(psd_sqrt(g.adjoint() * g).trace().real()).epsilon(1e-10));
}

TEST_CASE("matrix exponential and polar factor") {
    Rng rng(8);
    const ComplexMatrix g = rng.gaussian_matrix(3, 3);
    const ComplexMatrix h = (g + g.adjoint()) / 2.0;
    for (double t : {0.0, 0.3, 2.5}) {
        const auto u = herm_exp(h, t);
        CHECK(is_unitary(u));
        CHECK(max_abs(u - oracle::expm(h, t)) < 1e-10);
    }
    const auto z = herm_exp(pauli_z(), std::numbers::pi / 2);
    CHECK(std::abs(z(0, 0) - Complex(0.0, -1.0)) < 1e-15);

    const auto u = polar_unitary(g);
    CHECK(is_unitary(u));
    const ComplexMatrix p = u.adjoint() * g;  // g = U |g|
    CHECK(hermiticity_residual(p) < 1e-12);
    CHECK(herm_eig((p + p.adjoint()) / 2.0).values.minCoeff() > -1e-12);
}

TEST_CASE("Pauli algebra and basis helpers") {
    const Complex i(0.0, 1.0);
    CHECK(max_abs(pauli_x() * pauli_y() - i * pauli_z()) == 0.0);
    CHECK(max_abs(pauli_x() * pauli_x() - ComplexMatrix::Identity(2, 2)) == 0.0);
    CHECK(basis_vector(3, 2)(2) == Complex(1.0));
    CHECK(basis_projector(3, 1).trace() == Complex(1.0));
    CHECK_THROWS_AS(basis_vector(3, 3), DimensionError);
}
