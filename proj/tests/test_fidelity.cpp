#include <doctest.h>

#include <cmath>

#include "chanfid/errors.hpp"
#include "chanfid/fidelity.hpp"
#include "oracles.hpp"

using namespace chanfid;

TEST_CASE("identity and depolarizing closed forms") {
    CHECK(channel_fidelity(identity_channel(3), identity_channel(3)).value == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t d : {2u, 3u, 4u}) {
        for (double p : {0.0, 0.3, 0.7, 1.0}) {
            const double expect = 1.0 - p + p / static_cast<double>(d * d);
            const auto r = channel_fidelity(depolarizing(d, p), identity_channel(d));
            CHECK(r.value == doctest::Approx(expect).epsilon(1e-10));
            CHECK(r.route == FidelityRoute::ClosedFormIdentity);
            CHECK(choi_fidelity(depolarizing(d, p), identity_channel(d)) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
    CHECK(channel_fidelity(depolarizing(2, 1.0), identity_channel(2)).value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("unitary pairs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t d = 2 + seed % 3;
        const auto u = random_unitary(d, seed), v = random_unitary(d, seed + 100);
        const double expect = std::norm((u.adjoint() * v).trace()) / static_cast<double>(d * d);
        const auto r = channel_fidelity(unitary_channel(u), unitary_channel(v));
        CHECK(r.route == FidelityRoute::ClosedFormUnitary);
        CHECK(r.value == doctest::Approx(expect).epsilon(1e-10));
        CHECK(r.residual < kRouteAgreement);
        CHECK(unitary_pair_fidelity(u, v) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(channel_fidelity(unitary_channel(pauli_x()), identity_channel(2)).value < 1e-15);
    CHECK_THROWS_AS(unitary_pair_fidelity(pauli_x(), random_unitary(3, 1)), DimensionError);
}

TEST_CASE("Choi route against the spectral oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t d = 2 + seed % 2;
        const auto s = random_channel(d, d, 1 + seed % 3, seed), t = random_channel(d, d, 2, seed + 50);
        const ComplexMatrix rs = oracle::choi(s.kraus()) / static_cast<double>(d);
        const ComplexMatrix rt = oracle::choi(t.kraus()) / static_cast<double>(d);
        const auto r = channel_fidelity(s, t);
        CHECK(r.value == doctest::Approx(oracle::fidelity(rs, rt)).epsilon(1e-7));
        CHECK(std::abs(dilation_fidelity(s, t) - r.value) < 1e-8);
    }
}

TEST_CASE("fidelity to identity from the Kraus traces") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = random_channel(3, 3, 1 + seed % 4, seed);
        CHECK(fidelity_to_identity(t) == doctest::Approx(choi_fidelity(t, identity_channel(3))).epsilon(1e-9));
    }
    CHECK_THROWS_AS(fidelity_to_identity(random_channel(2, 3, 1, 1)), DimensionError);
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(channel_fidelity(identity_channel(2), identity_channel(3)), DimensionError);
    CHECK_THROWS_AS(dilation_fidelity(random_channel(2, 3, 1, 1), random_channel(2, 2, 1, 1)), DimensionError);
}

TEST_CASE("CF property suite on seeded pairs") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t d = 2 + seed % 2;
        const auto s = random_channel(d, d, 1 + seed % 3, seed), t = random_channel(d, d, 1 + (seed / 3) % 3, seed + 1000);
        const auto checks = cf_property_suite(seeded_property_inputs(s, t, seed));
        CHECK(checks.size() == 7);
        for (const auto& c : checks) {
            INFO(c.name << " lhs=" << c.lhs << " rhs=" << c.rhs);
            CHECK(c.passed);
            CHECK(c.holds_within(1.0) == c.passed);
        }
    }
}

TEST_CASE("CF1 faithfulness on equal and orthogonal pairs") {
    const auto s = random_channel(2, 2, 2, 7);
    const auto eq = cf_property_suite(seeded_property_inputs(s, s, 1));
    CHECK(eq.front().lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(all_passed(eq));
    const auto orth = cf_property_suite(seeded_property_inputs(unitary_channel(pauli_x()), identity_channel(2), 1));
    CHECK(orth.front().lhs < 1e-15);
    CHECK(all_passed(orth));
}

TEST_CASE("tightened tolerances re-evaluate equality checks") {
    PropertyCheck c{"x", 1.0, 1.0 + 1e-9, 1e-8, true, CheckKind::Equality};
    CHECK(c.holds_within(1e-8));
    CHECK_FALSE(c.holds_within(1e-10));
    PropertyCheck g{"y", 0.5, 0.5 + 1e-10, 1e-9, true, CheckKind::AtLeast};
    CHECK(g.holds_within(1e-9));
    CHECK_FALSE(g.holds_within(1e-11));
}
