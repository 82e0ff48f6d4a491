#pragma once

// Verification of an error-correcting code against a noise channel: the code
// K corrects T with recovery R iff F(R o T restricted to K, id) = 1.

#include <optional>

#include "chanfid/channels.hpp"

namespace chanfid {

struct CodeSpec {
    std::size_t logical_dim = 0;
    std::size_t coding_dim = 0;
    ComplexMatrix encoder;  // coding_dim x logical_dim isometry
    QuantumChannel recovery;

    /// Throws unless the encoder is an isometry within 1e-8 and the recovery
    /// acts on the coding space.
    void validate() const;
};

enum class RestrictionStatus {
    Valid,               // leakage <= 1e-9: the logical map is a channel
    Leaky,               // 1e-9 < leakage <= 1e-6: fidelity reported, never correctable
    InvalidRestriction,  // leakage > 1e-6: no fidelity reported
};

struct QeccReport {
    std::optional<double> fidelity;  // F(Dec o R o T o Enc, id)
    double leakage = 0.0;            // 1 - min over logical states of the retained trace
    bool correctable = false;
    RestrictionStatus status = RestrictionStatus::Valid;
};

inline constexpr double kLeakageExact = 1e-9;
inline constexpr double kLeakageLimit = 1e-6;

/// Kraus operators E* R_a T_b E of the logical map, not yet validated.
std::vector<ComplexMatrix> logical_kraus(const CodeSpec& code, const QuantumChannel& noise);

QeccReport qecc_check(const CodeSpec& code, const QuantumChannel& noise);

/// |0_L> = |000>, |1_L> = |111> with the syndrome-measurement recovery
/// {P_0, X_1 P_1, X_2 P_2, X_3 P_3}, P_j the projector onto "qubit j flipped".
CodeSpec three_qubit_bit_flip_code();

/// Pauli X on qubit `q` (0-based, leftmost = 0) of an n-qubit register.
ComplexMatrix pauli_x_on(std::size_t n_qubits, std::size_t q);

}  // namespace chanfid
