#include <doctest.h>

#include <cmath>

#include "chanfid/errors.hpp"
#include "chanfid/states.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace chanfid;

TEST_CASE("DensityMatrix and PureState validation") {
    CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{bad}, InvalidInputError);  // trace 2
    bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{bad}, InvalidInputError);  // not PSD
    bad = DensityMatrix::maximally_mixed(2).matrix();
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{bad}, InvalidInputError);  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(2, 3)}, DimensionError);
    CHECK_THROWS_AS(PureState{ComplexVector::Ones(2)}, InvalidInputError);
}

TEST_CASE("fidelity closed forms") {
    Rng rng(11);
    SUBCASE("pure against pure is the squared overlap") {
        const PureState a(rng.unit_vector(3)), b(rng.unit_vector(3));
        CHECK(state_fidelity(a.density(), b.density()) ==
              doctest::Approx(std::norm(a.amplitudes().dot(b.amplitudes()))).epsilon(1e-10));
    }
    SUBCASE("pure against mixed is <psi|sigma|psi>") {
        const PureState a(rng.unit_vector(3));
        const auto s = testutil::random_state(rng, 3, 3);
        CHECK(state_fidelity(a.density(), s) ==
              doctest::Approx(a.amplitudes().dot(s.matrix() * a.amplitudes()).real()).epsilon(1e-10));
    }
    SUBCASE("commuting states give the classical fidelity") {
        ComplexMatrix p = ComplexMatrix::Zero(3, 3), q = ComplexMatrix::Zero(3, 3);
        p.diagonal() << 0.5, 0.3, 0.2;
        q.diagonal() << 0.1, 0.1, 0.8;
        const double bc = std::sqrt(0.05) + std::sqrt(0.03) + std::sqrt(0.16);
        CHECK(state_fidelity(DensityMatrix(p), DensityMatrix(q)) == doctest::Approx(bc * bc).epsilon(1e-12));
    }
    SUBCASE("orthogonal supports") {
        CHECK(state_fidelity(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) == 0.0);
    }
}

TEST_CASE("fidelity matches the spectral oracle, both routes agree") {
    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 2 + trial % 4;
        const auto a = testutil::random_state(rng, n, 1 + trial % n);
        const auto b = testutil::random_state(rng, n, 1 + (trial / 2) % n);
        const auto routes = fidelity_routes(a, b);
        CHECK(std::abs(routes.nested_root - routes.trace_norm) < 1e-9);
        const double f = state_fidelity(a, b);
        CHECK(f == doctest::Approx(oracle::fidelity(a.matrix(), b.matrix())).epsilon(1e-7));
        CHECK(f == doctest::Approx(state_fidelity(b, a)).epsilon(1e-10));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(state_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Fuchs-van de Graaf and trace distance") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testutil::random_state(rng, 3, 2), b = testutil::random_state(rng, 3, 3);
        const double f = state_fidelity(a, b), t = trace_distance(a, b);
        CHECK(2.0 - 2.0 * std::sqrt(f) <= t + 1e-12);
        CHECK(t <= 2.0 * std::sqrt(1.0 - f) + 1e-12);
    }
    CHECK(trace_distance(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) ==
          doctest::Approx(2.0));
}

TEST_CASE("purification and the Uhlmann witness") {
    Rng rng(14);
    const auto rho = testutil::random_state(rng, 3, 2), sigma = testutil::random_state(rng, 3, 3);
    const auto p = purify(rho);
    CHECK(p.dim() == 9);
    CHECK(max_abs(partial_trace(p.projector(), {3, 3}, {0}) - rho.matrix()) < 1e-12);

    const auto w = uhlmann_witness(rho, sigma);
    CHECK(is_unitary(w.environment_unitary));
    CHECK(max_abs(partial_trace(w.psi_sigma.projector(), {3, 3}, {0}) - sigma.matrix()) < 1e-12);
    CHECK(w.overlap == doctest::Approx(state_fidelity(rho, sigma)).epsilon(1e-9));
    CHECK(w.overlap == doctest::Approx(std::norm(w.psi_rho.amplitudes().dot(w.psi_sigma.amplitudes()))).epsilon(1e-12));

    // Any other environment unitary does no better.
    const auto ps = purify(sigma);
    for (int k = 0; k < 20; ++k) {
        const ComplexVector other = kron(ComplexMatrix::Identity(3, 3), rng.haar_unitary(3)) * ps.amplitudes();
        CHECK(std::norm(w.psi_rho.amplitudes().dot(other)) <= w.overlap + 1e-12);
    }
}

TEST_CASE("POVM statistics bound and attain sqrt F") {
    Rng rng(15);
    const auto rho = testutil::random_state(rng, 3, 3), sigma = testutil::random_state(rng, 3, 2);
    const double root = std::sqrt(state_fidelity(rho, sigma));
    for (int k = 0; k < 50; ++k) {
        CHECK(povm_statistic(rho, sigma, testutil::random_povm(rng, 3, 2 + k % 4)) >= root - 1e-10);
    }
    CHECK(povm_statistic(rho, sigma, optimal_povm(rho, sigma)) == doctest::Approx(root).epsilon(1e-6));

    // sigma rank-deficient and rho pure: the kernel projector matters.
    const PureState psi(rng.unit_vector(3));
    CHECK(povm_statistic(psi.density(), sigma, optimal_povm(psi.density(), sigma)) ==
          doctest::Approx(std::sqrt(state_fidelity(psi.density(), sigma))).epsilon(1e-6));
}

TEST_CASE("Povm validation") {
    CHECK_NOTHROW(Povm::from_basis(ComplexMatrix::Identity(2, 2)));
    CHECK_THROWS_AS(Povm({basis_projector(2, 0)}), InvalidInputError);
    const ComplexMatrix twice = 2.0 * basis_projector(2, 0);
    CHECK_THROWS_AS(Povm({twice, ComplexMatrix::Identity(2, 2) - twice}), InvalidInputError);  // not PSD
}
