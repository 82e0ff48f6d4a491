#include "chanfid/qecc.hpp"

#include <algorithm>
#include <sstream>

#include "chanfid/errors.hpp"
#include "chanfid/fidelity.hpp"

namespace chanfid {

void CodeSpec::validate() const {
    if (logical_dim == 0 || coding_dim < logical_dim) {
        throw DimensionError("CodeSpec: need 0 < logical_dim <= coding_dim");
    }
    if (encoder.rows() != static_cast<Eigen::Index>(coding_dim) ||
        encoder.cols() != static_cast<Eigen::Index>(logical_dim)) {
        throw DimensionError("CodeSpec: encoder must be coding_dim x logical_dim");
    }
    const double res = isometry_residual(encoder);
    if (res > tol::kUnitary) {
        std::ostringstream os;
        os << "CodeSpec: encoder is not an isometry (||E*E - I||_max = " << res << ")";
        throw InvalidInputError(os.str());
    }
    if (recovery.dim_in() != coding_dim || recovery.dim_out() != coding_dim) {
        throw DimensionError("CodeSpec: recovery must act on the coding space");
    }
}

std::vector<ComplexMatrix> logical_kraus(const CodeSpec& code, const QuantumChannel& noise) {
    code.validate();
    if (noise.dim_in() != code.coding_dim || noise.dim_out() != code.coding_dim) {
        throw DimensionError("qecc_check: noise must act on the coding space");
    }
    std::vector<ComplexMatrix> out;
    out.reserve(code.recovery.kraus().size() * noise.kraus().size());
    for (const auto& r : code.recovery.kraus()) {
        for (const auto& t : noise.kraus()) {
            out.push_back(code.encoder.adjoint() * r * t * code.encoder);
        }
    }
    return out;
}

QeccReport qecc_check(const CodeSpec& code, const QuantumChannel& noise) {
    const auto kraus = logical_kraus(code, noise);
    const auto k = static_cast<Eigen::Index>(code.logical_dim);

    // Retained trace of the logical state rho is tr(rho * sum L* L); its
    // minimum over logical states is the smallest eigenvalue.
    ComplexMatrix retained = ComplexMatrix::Zero(k, k);
    for (const auto& l : kraus) retained.noalias() += l.adjoint() * l;
    QeccReport report;
    report.leakage = std::max(0.0, 1.0 - herm_eig(retained).values.minCoeff());

    if (report.leakage > kLeakageLimit) {
        report.status = RestrictionStatus::InvalidRestriction;
        return report;
    }
    if (report.leakage > kLeakageExact) {
        // Not a channel on K; F(., id) = <phi+|R_L|phi+> / k^2 still applies.
        double total = 0.0;
        for (const auto& l : kraus) total += std::norm(l.trace());
        report.status = RestrictionStatus::Leaky;
        report.fidelity = std::min(1.0, total / static_cast<double>(k * k));
        return report;
    }
    const QuantumChannel logical(kraus);
    report.fidelity = channel_fidelity(logical, identity_channel(code.logical_dim)).value;
    report.correctable = *report.fidelity >= 1.0 - 1e-9;
    return report;
}

ComplexMatrix pauli_x_on(std::size_t n_qubits, std::size_t q) {
    if (q >= n_qubits) throw DimensionError("pauli_x_on: qubit index out of range");
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        out = kron(out, i == q ? pauli_x() : ComplexMatrix::Identity(2, 2));
    }
    return out;
}

CodeSpec three_qubit_bit_flip_code() {
    ComplexMatrix enc = ComplexMatrix::Zero(8, 2);
    enc(0, 0) = 1.0;  // |000>
    enc(7, 1) = 1.0;  // |111>

    auto proj = [](std::initializer_list<int> states) {
        ComplexMatrix p = ComplexMatrix::Zero(8, 8);
        for (int s : states) p(s, s) = 1.0;
        return p;
    };
    // Syndromes: no flip, qubit 0 flipped, qubit 1 flipped, qubit 2 flipped.
    const ComplexMatrix p0 = proj({0b000, 0b111});
    const ComplexMatrix p1 = proj({0b100, 0b011});
    const ComplexMatrix p2 = proj({0b010, 0b101});
    const ComplexMatrix p3 = proj({0b001, 0b110});
    QuantumChannel recovery({p0, pauli_x_on(3, 0) * p1, pauli_x_on(3, 1) * p2, pauli_x_on(3, 2) * p3});
    return CodeSpec{2, 8, enc, std::move(recovery)};
}

}  // namespace chanfid
