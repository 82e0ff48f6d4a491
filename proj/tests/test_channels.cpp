#include <doctest.h>

#include <cmath>

#include "chanfid/channels.hpp"
#include "chanfid/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace chanfid;

namespace {

double choi_distance(const QuantumChannel& a, const QuantumChannel& b) {
    return max_abs(choi(a).matrix() - choi(b).matrix());
}

}  // namespace

TEST_CASE("Kraus completeness is enforced with a named residual") {
    const ComplexMatrix half = 0.9 * ComplexMatrix::Identity(2, 2);
    try {
        QuantumChannel bad({half});
        FAIL("expected a throw");
    } catch (const InvalidInputError& e) {
        CHECK(std::string(e.what()).find("completeness residual") != std::string::npos);
    }
    CHECK_THROWS_AS(QuantumChannel({}), InvalidInputError);
    CHECK_THROWS_AS(QuantumChannel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}), DimensionError);
    CHECK_THROWS_AS(unitary_channel(2.0 * ComplexMatrix::Identity(2, 2)), InvalidInputError);
    CHECK_THROWS_AS(depolarizing(2, 1.5), InvalidInputError);
}

TEST_CASE("Choi operator matches the definition and the Kraus sum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ch = random_channel(2 + seed % 2, 2 + (seed / 2) % 3, 1 + seed % 3, seed);
        const auto r = choi(ch).matrix();
        CHECK(max_abs(r - oracle::choi(ch.kraus())) < 1e-12);
        CHECK(max_abs(r - choi_from_action(ch)) < 1e-12);
        const auto diag = validate(ch);
        CHECK(diag.valid());
        CHECK(diag.completeness_residual < 1e-12);
        CHECK(choi(ch).normalized_state().matrix().trace().real() == doctest::Approx(1.0));
    }
}

TEST_CASE("Choi operators of the standard channels") {
    const auto id = choi(identity_channel(2)).matrix();
    const auto phi = vectorize(ComplexMatrix::Identity(2, 2));
    CHECK(max_abs(id - phi * phi.adjoint()) == 0.0);

    const auto x = choi(unitary_channel(pauli_x())).matrix();
    CHECK(max_abs(x - vectorize(pauli_x()) * vectorize(pauli_x()).adjoint()) < 1e-15);

    CHECK(max_abs(choi(depolarizing(2, 1.0)).matrix() - ComplexMatrix::Identity(4, 4) / 2.0) < 1e-14);
    // Pauli oracle: sum over |sigma_i / 2>>.
    ComplexMatrix pauli = ComplexMatrix::Zero(4, 4);
    for (const auto& s : {ComplexMatrix(ComplexMatrix::Identity(2, 2)), pauli_x(), pauli_y(), pauli_z()}) {
        pauli += vectorize(s / 2.0) * vectorize(s / 2.0).adjoint();
    }
    CHECK(max_abs(choi(depolarizing(2, 1.0)).matrix() - pauli) < 1e-14);
}

TEST_CASE("depolarizing action on qudits") {
    Rng rng(21);
    for (std::size_t d : {2u, 3u, 4u}) {
        for (double p : {0.0, 0.3, 1.0}) {
            const auto rho = testutil::random_state(rng, d, 2);
            const ComplexMatrix expect = (1.0 - p) * rho.matrix() +
                                         p * ComplexMatrix::Identity(d, d) / static_cast<double>(d);
            CHECK(max_abs(apply(depolarizing(d, p), rho).matrix() - expect) < 1e-13);
        }
    }
}

TEST_CASE("Kraus -> Choi -> Kraus round trip") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ch = random_channel(2 + seed % 2, 2 + seed % 3, 1 + seed % 4, 100 + seed);
        const auto back = kraus_from_choi(choi(ch));
        CHECK(choi_distance(ch, back) < 1e-9);
        CHECK(back.kraus().size() <= ch.dim_in() * ch.dim_out());
        CHECK(back.kraus().size() == std::min<std::size_t>(1 + seed % 4, ch.dim_in() * ch.dim_out()));
    }
    const auto u = kraus_from_choi(choi(unitary_channel(pauli_y())));
    CHECK(u.kraus().size() == 1);
    CHECK(std::abs(std::abs(hs_inner(u.kraus()[0], pauli_y())) - 2.0) < 1e-12);
}

TEST_CASE("ChoiOperator validation") {
    CHECK_THROWS_AS(ChoiOperator(2, 2, ComplexMatrix::Identity(4, 4)), InvalidInputError);  // Tr_K R = 2I
    CHECK_THROWS_AS(ChoiOperator(2, 3, ComplexMatrix::Identity(4, 4)), DimensionError);
    ComplexMatrix neg = ComplexMatrix::Identity(4, 4) / 2.0;
    neg(0, 0) = -0.5;
    neg(1, 1) = 1.5;
    CHECK_THROWS_AS(ChoiOperator(2, 2, neg), InvalidInputError);
}

TEST_CASE("apply agrees with apply_via_choi and with the loop oracle") {
    Rng rng(22);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ch = random_channel(3, 2, 3, seed);
        const auto rho = testutil::random_state(rng, 3, 1 + seed % 3);
        const auto out = apply(ch, rho).matrix();
        CHECK(max_abs(out - apply_via_choi(choi(ch), rho).matrix()) < 1e-10);
        CHECK(max_abs(out - oracle::apply_kraus(ch.kraus(), rho.matrix())) < 1e-13);
    }
}

TEST_CASE("dual map and the Stinespring isometry") {
    Rng rng(23);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ch = random_channel(2, 3, 2 + seed % 3, seed);
        const auto v = stinespring(ch);
        CHECK(isometry_residual(v.matrix()) < 1e-12);
        const ComplexMatrix g = rng.gaussian_matrix(3, 3);
        const ComplexMatrix obs = (g + g.adjoint()) / 2.0;
        CHECK(max_abs(v.dual_apply(obs) - dual_apply(ch, obs)) < 1e-9);

        // tr(X T(rho)) = tr(T*(X) rho)
        const auto rho = testutil::random_state(rng, 2, 2);
        CHECK(std::abs((obs * apply(ch, rho).matrix()).trace() - (dual_apply(ch, obs) * rho.matrix()).trace()) <
              1e-12);
        // Tr_E V rho V* = T(rho)
        const ComplexMatrix big = v.matrix() * rho.matrix() * v.matrix().adjoint();
        CHECK(max_abs(partial_trace(big, {3, v.dim_env()}, {0}) - apply(ch, rho).matrix()) < 1e-12);

        const auto padded = stinespring(ch, 7);
        CHECK(padded.dim_env() == 7);
        CHECK(max_abs(padded.dual_apply(obs) - dual_apply(ch, obs)) < 1e-12);
    }
    CHECK_THROWS_AS(stinespring(random_channel(2, 2, 3, 1), 2), DimensionError);
}

TEST_CASE("composition, tensor products, mixtures") {
    Rng rng(24);
    const auto a = random_channel(2, 3, 2, 1), b = random_channel(3, 2, 2, 2);
    const auto rho = testutil::random_state(rng, 2, 2);
    const auto ab = compose(b, a);
    CHECK(max_abs(apply(ab, rho).matrix() - apply(b, apply(a, rho)).matrix()) < 1e-12);
    CHECK(choi_distance(ab, compress(ab)) < 1e-10);
    CHECK(compress(ab).kraus().size() <= 4);
    CHECK_THROWS_AS(compose(a, a), DimensionError);

    const auto t = tensor(a, b);
    CHECK(t.dim_in() == 6);
    CHECK(t.dim_out() == 6);
    CHECK(max_abs(choi(t).matrix() - tensor_choi(choi(a), choi(b))) < 1e-12);
    const auto sigma = testutil::random_state(rng, 3, 3);
    CHECK(max_abs(apply(t, DensityMatrix(kron(rho.matrix(), sigma.matrix()))).matrix() -
                  kron(apply(a, rho).matrix(), apply(b, sigma).matrix())) < 1e-12);

    const auto m = mixture(0.3, a, random_channel(2, 3, 1, 3));
    CHECK(max_abs(choi(m).matrix() -
                  (0.3 * choi(a).matrix() + 0.7 * choi(random_channel(2, 3, 1, 3)).matrix())) < 1e-12);
    CHECK_THROWS_AS(mixture(1.2, a, a), InvalidInputError);
}

TEST_CASE("random channels are deterministic in the seed") {
    const auto a = random_channel(3, 2, 2, 42), b = random_channel(3, 2, 2, 42), c = random_channel(3, 2, 2, 43);
    CHECK(choi_distance(a, b) == 0.0);
    CHECK(choi_distance(a, c) > 1e-3);
    CHECK(is_unitary(random_unitary(4, 5)));
    CHECK(max_abs(random_unitary(4, 5) - random_unitary(4, 5)) == 0.0);
}

TEST_CASE("constant channel and unitary detection") {
    Rng rng(25);
    const PureState psi(rng.unit_vector(3));
    const auto c = constant_channel(2, psi);
    CHECK(max_abs(apply(c, testutil::random_state(rng, 2, 2)).matrix() - psi.projector()) < 1e-13);
    CHECK_FALSE(unitary_of(c).has_value());

    const auto u = random_unitary(3, 9);
    const auto back = unitary_of(compress(compose(unitary_channel(u), identity_channel(3))));
    REQUIRE(back.has_value());
    CHECK(std::norm((back->adjoint() * u).trace()) == doctest::Approx(9.0).epsilon(1e-10));
    CHECK(is_identity(identity_channel(4)));
    CHECK_FALSE(is_identity(unitary_channel(pauli_z())));
    CHECK(is_identity(unitary_channel(Complex(0.0, 1.0) * ComplexMatrix::Identity(2, 2))));
}
