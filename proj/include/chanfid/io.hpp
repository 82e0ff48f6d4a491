#pragma once

// JSON interchange: channel documents, the auxiliary input documents of the
// CLI, and the deterministic run report.
//
// Complex numbers are [re, im] pairs; matrices are row-major nested arrays.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "chanfid/channels.hpp"
#include "chanfid/discrimination.hpp"
#include "chanfid/errors.hpp"
#include "chanfid/qecc.hpp"

namespace chanfid::io {

using Json = nlohmann::json;

/// Malformed document. The message carries a byte offset for syntax errors
/// and a JSON pointer for schema errors.
class ParseError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

Json parse_json(std::string_view text, std::string_view origin = "<inline>");
Json read_json_file(const std::string& path);

ComplexMatrix matrix_from_json(const Json& j, const std::string& where);
ComplexVector vector_from_json(const Json& j, const std::string& where);
Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);

/// A parsed channel document together with the concrete channel.
struct ChannelDocument {
    std::size_t d_in = 0;
    std::size_t d_out = 0;
    std::string kind;
    Json payload;
};

ChannelDocument document_from_json(const Json& j);
/// Constructs the channel (kind-specific constructors for non-kraus kinds)
/// and checks it against the declared dimensions.
QuantumChannel to_channel(const ChannelDocument& doc);
QuantumChannel parse_channel(const Json& j);
QuantumChannel parse_channel_text(std::string_view text);

/// The matrix of a "unitary" document, or the implementing unitary of any
/// other channel document whose Choi state is pure.
ComplexMatrix parse_unitary(const Json& j);

Json kraus_document(const QuantumChannel& ch);
/// kind "choi", payload {"matrix": R_T, "normalized_state": rho_T}.
Json choi_document(const ChoiOperator& c);

/// {"dim", "horizon", "hamiltonians": [...], optional "grid_points"}.
HamiltonianEnsemble parse_ensemble(const Json& j);
/// {"logical_dim", "coding_dim", "encoder", "recovery": channel document}.
CodeSpec parse_code(const Json& j);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string digest(const Json& j);

/// Sorted keys, no whitespace, numbers printed with %.17g (integers as
/// integers), non-finite numbers as null.
std::string canonical_dump(const Json& j);

struct RunReport {
    std::string command;
    Json inputs = Json::array();  // digests of the parsed documents
    Json results = Json::object();
    Json tolerances = Json::object();
    std::optional<std::uint64_t> seed;

    Json to_json() const;
    std::string serialize() const;  // canonical_dump + trailing newline
};

}  // namespace chanfid::io
