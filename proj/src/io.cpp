#include "chanfid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chanfid::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(where, "non-finite number");
    return x;
}

std::size_t count(const Json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::size_t>();
    fail(where, "expected a non-negative integer");
}

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected a [re, im] pair");
    return {number(j[0], where + "/0"), number(j[1], where + "/1")};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void dump_to(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted keys
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump_to(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_to(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += "null";
                break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

Json parse_json(std::string_view text, std::string_view origin) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::ostringstream os;
        os << origin << ": byte " << e.byte << ": " << e.what();
        throw ParseError(os.str());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail(where + "/0", "expected a non-empty row");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rw = where + "/" + std::to_string(r);
        if (!j[r].is_array() || j[r].size() != cols) {
            fail(rw, "expected a row of length " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(j[r][c], rw + "/" + std::to_string(c));
        }
    }
    return m;
}

ComplexVector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(i) = complex_from_json(j[i], where + "/" + std::to_string(i));
    }
    return v;
}

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const ComplexVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

ChannelDocument document_from_json(const Json& j) {
    ChannelDocument doc;
    doc.d_in = count(field(j, "d_in", ""), "/d_in");
    doc.d_out = count(field(j, "d_out", ""), "/d_out");
    const auto& kind = field(j, "kind", "");
    if (!kind.is_string()) fail("/kind", "expected a string");
    doc.kind = kind.get<std::string>();
    doc.payload = field(j, "payload", "");
    if (doc.d_in == 0 || doc.d_out == 0) fail("", "d_in and d_out must be positive");
    return doc;
}

QuantumChannel to_channel(const ChannelDocument& doc) {
    const auto& p = doc.payload;
    auto build = [&]() -> QuantumChannel {
        if (doc.kind == "kraus") {
            if (!p.is_array() || p.empty()) fail("/payload", "expected a non-empty array of matrices");
            std::vector<ComplexMatrix> ks;
            for (std::size_t i = 0; i < p.size(); ++i) {
                ks.push_back(matrix_from_json(p[i], "/payload/" + std::to_string(i)));
            }
            return QuantumChannel(std::move(ks));
        }
        if (doc.kind == "choi") {
            const bool wrapped = p.is_object();
            const ComplexMatrix m =
                matrix_from_json(wrapped ? field(p, "matrix", "/payload") : p,
                                 wrapped ? "/payload/matrix" : "/payload");
            return kraus_from_choi(ChoiOperator(doc.d_in, doc.d_out, m));
        }
        if (doc.kind == "unitary") return unitary_channel(matrix_from_json(p, "/payload"));
        if (doc.kind == "depolarizing") {
            if (doc.d_in != doc.d_out) fail("", "depolarizing needs d_in = d_out");
            return depolarizing(doc.d_in, number(field(p, "p", "/payload"), "/payload/p"));
        }
        if (doc.kind == "constant") {
            return constant_channel(doc.d_in,
                                    PureState(vector_from_json(field(p, "psi", "/payload"), "/payload/psi")));
        }
        if (doc.kind == "random") {
            const auto rank = count(field(p, "rank", "/payload"), "/payload/rank");
            const auto& seed = field(p, "seed", "/payload");
            if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
                fail("/payload/seed", "expected a non-negative integer");
            }
            return random_channel(doc.d_in, doc.d_out, rank, seed.get<std::uint64_t>());
        }
        fail("/kind", "unknown kind \"" + doc.kind + "\"");
    };
    QuantumChannel ch = build();
    if (ch.dim_in() != doc.d_in || ch.dim_out() != doc.d_out) {
        std::ostringstream os;
        os << "declared " << doc.d_out << "x" << doc.d_in << " but the payload is " << ch.dim_out()
           << "x" << ch.dim_in();
        fail("", os.str());
    }
    return ch;
}

QuantumChannel parse_channel(const Json& j) { return to_channel(document_from_json(j)); }

QuantumChannel parse_channel_text(std::string_view text) { return parse_channel(parse_json(text)); }

ComplexMatrix parse_unitary(const Json& j) {
    const auto doc = document_from_json(j);
    if (doc.kind == "unitary") {
        const ComplexMatrix u = matrix_from_json(doc.payload, "/payload");
        to_channel(doc);  // validates
        return u;
    }
    const auto u = unitary_of(to_channel(doc));
    if (!u) fail("", "channel is not unitarily implemented");
    return *u;
}

Json kraus_document(const QuantumChannel& ch) {
    Json ks = Json::array();
    for (const auto& k : ch.kraus()) ks.push_back(to_json(k));
    return Json{{"d_in", ch.dim_in()}, {"d_out", ch.dim_out()}, {"kind", "kraus"}, {"payload", ks}};
}

Json choi_document(const ChoiOperator& c) {
    return Json{{"d_in", c.dim_in()},
                {"d_out", c.dim_out()},
                {"kind", "choi"},
                {"payload",
                 {{"matrix", to_json(c.matrix())}, {"normalized_state", to_json(c.normalized_state().matrix())}}}};
}

HamiltonianEnsemble parse_ensemble(const Json& j) {
    HamiltonianEnsemble ens;
    ens.dim = count(field(j, "dim", ""), "/dim");
    ens.horizon = number(field(j, "horizon", ""), "/horizon");
    if (j.contains("grid_points")) ens.grid_points = count(j["grid_points"], "/grid_points");
    const auto& hs = field(j, "hamiltonians", "");
    if (!hs.is_array()) fail("/hamiltonians", "expected an array of matrices");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        ens.hamiltonians.push_back(matrix_from_json(hs[i], "/hamiltonians/" + std::to_string(i)));
    }
    ens.validate();
    return ens;
}

CodeSpec parse_code(const Json& j) {
    const auto k = count(field(j, "logical_dim", ""), "/logical_dim");
    const auto n = count(field(j, "coding_dim", ""), "/coding_dim");
    ComplexMatrix enc = matrix_from_json(field(j, "encoder", ""), "/encoder");
    CodeSpec code{k, n, std::move(enc), parse_channel(field(j, "recovery", ""))};
    code.validate();
    return code;
}

std::string canonical_dump(const Json& j) {
    std::string out;
    dump_to(j, out);
    return out;
}

std::string digest(const Json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_dump(j)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json RunReport::to_json() const {
    Json j{{"command", command}, {"inputs", inputs}, {"results", results}, {"tolerances", tolerances}};
    if (seed) j["seed"] = *seed;
    return j;
}

std::string RunReport::serialize() const { return canonical_dump(to_json()) + "\n"; }

}  // namespace chanfid::io
