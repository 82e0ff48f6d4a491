#include <doctest.h>

#include <string>

#include "chanfid/fidelity.hpp"
#include "chanfid/io.hpp"

using namespace chanfid;
using io::Json;

namespace {

bool message_contains(const std::string& text, const std::string& needle) {
    try {
        io::parse_channel_text(text);
    } catch (const std::exception& e) {
        INFO(e.what());
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("channel documents of every kind") {
    const auto x = io::parse_channel_text(
        R"({"d_in":2,"d_out":2,"kind":"unitary","payload":[[[0,0],[1,0]],[[1,0],[0,0]]]})");
    CHECK(channel_fidelity(x, unitary_channel(pauli_x())).value == doctest::Approx(1.0));

    const auto dep = io::parse_channel_text(R"({"kind":"depolarizing","d_in":2,"d_out":2,"payload":{"p":0.5}})");
    CHECK(max_abs(choi(dep).matrix() - choi(depolarizing(2, 0.5)).matrix()) < 1e-14);

    const auto cst = io::parse_channel_text(
        R"({"kind":"constant","d_in":3,"d_out":2,"payload":{"psi":[[0,0],[1,0]]}})");
    CHECK(cst.dim_in() == 3);
    CHECK(cst.dim_out() == 2);

    const auto rnd = io::parse_channel_text(R"({"kind":"random","d_in":2,"d_out":3,"payload":{"rank":2,"seed":9}})");
    CHECK(max_abs(choi(rnd).matrix() - choi(random_channel(2, 3, 2, 9)).matrix()) == 0.0);

    const auto doc = io::kraus_document(rnd);
    CHECK(max_abs(choi(io::parse_channel(doc)).matrix() - choi(rnd).matrix()) == 0.0);

    const auto cdoc = io::choi_document(choi(rnd));
    CHECK(cdoc["kind"] == "choi");
    CHECK(max_abs(choi(io::parse_channel(cdoc)).matrix() - choi(rnd).matrix()) < 1e-12);
    // bare-matrix payload
    Json bare = cdoc;
    bare["payload"] = cdoc["payload"]["matrix"];
    CHECK(max_abs(choi(io::parse_channel(bare)).matrix() - choi(rnd).matrix()) < 1e-12);
}

TEST_CASE("malformed documents are rejected with a location") {
    CHECK(message_contains(R"({"d_in":2,)", "byte"));
    CHECK(message_contains(R"({"d_in":2,"d_out":2,"kind":"kraus","payload":[[[[0.9,0],[0,0]],[[0,0],[0.9,0]]]]})",
                           "completeness residual"));
    CHECK(message_contains(R"({"d_in":2,"d_out":2,"kind":"unitary","payload":[[[1,0],[0,0]],[[0,0],[1]]]})",
                           "/payload/1/1"));
    CHECK(message_contains(R"({"d_in":2,"d_out":2,"kind":"unitary","payload":[[[1,0],[0,0]],[[0,0]]]})",
                           "/payload/1"));
    CHECK(message_contains(R"({"d_in":2,"d_out":2,"kind":"teleport","payload":[]})", "unknown kind"));
    CHECK(message_contains(R"({"d_out":2,"kind":"unitary","payload":[]})", "d_in"));
    CHECK(message_contains(R"({"d_in":3,"d_out":3,"kind":"unitary","payload":[[[1,0],[0,0]],[[0,0],[1,0]]]})",
                           "declared"));
    CHECK(message_contains(R"({"d_in":2,"d_out":2,"kind":"depolarizing","payload":{"p":"x"}})", "/payload/p"));
    CHECK_THROWS_AS(io::parse_channel_text("[1, 2"), io::ParseError);
}

TEST_CASE("unitary extraction") {
    const auto u = io::parse_unitary(Json::parse(R"({"d_in":2,"d_out":2,"kind":"unitary","payload":[[[0,0],[1,0]],[[1,0],[0,0]]]})"));
    CHECK(max_abs(u - pauli_x()) == 0.0);
    CHECK_THROWS_AS(io::parse_unitary(Json::parse(R"({"kind":"depolarizing","d_in":2,"d_out":2,"payload":{"p":0.5}})")),
                    io::ParseError);
}

TEST_CASE("ensemble and code documents") {
    const auto ens = io::parse_ensemble(Json::parse(
        R"({"dim":2,"horizon":3.0,"grid_points":16,"hamiltonians":[[[[0,0],[0,0]],[[0,0],[0,0]]],[[[1,0],[0,0]],[[0,0],[-1,0]]]]})"));
    CHECK(ens.grid_points == 16);
    CHECK(ens.hamiltonians.size() == 2);
    CHECK_THROWS_AS(io::parse_ensemble(Json::parse(R"({"dim":2,"horizon":3.0,"hamiltonians":[]})")),
                    InvalidInputError);

    Json code{{"logical_dim", 1}, {"coding_dim", 2}, {"encoder", io::to_json(ComplexMatrix(basis_vector(2, 0)))},
              {"recovery", io::kraus_document(identity_channel(2))}};
    const auto spec = io::parse_code(code);
    CHECK(spec.coding_dim == 2);
    code["encoder"] = io::to_json(ComplexMatrix(2.0 * basis_vector(2, 0)));
    CHECK_THROWS_AS(io::parse_code(code), InvalidInputError);
}

TEST_CASE("canonical serialization") {
    const Json j = Json::parse(R"({"b":[1,0.1,-2.5e-300],"a":{"z":true,"y":null,"x":"s\"q"}})");
    CHECK(io::canonical_dump(j) == R"({"a":{"x":"s\"q","y":null,"z":true},"b":[1,0.10000000000000001,-2.5e-300]})");
    CHECK(io::digest(j) == io::digest(Json::parse(io::canonical_dump(j))));
    CHECK(io::digest(j).size() == 16);
    CHECK(io::digest(j) != io::digest(Json::parse(R"({"b":[1,0.1]})")));

    // 17 significant digits round-trip exactly
    const double v = 0.12102133806468433;
    CHECK(Json::parse(io::canonical_dump(Json(v))).get<double>() == v);

    io::RunReport r;
    r.command = "x";
    r.seed = 3;
    r.results = {{"v", 1.0 / 3.0}};
    CHECK(r.serialize() == r.serialize());
    CHECK(r.serialize().back() == '\n');
    CHECK(r.serialize().find(R"("seed":3)") != std::string::npos);
}
