#pragma once

// Channel fidelity F(S, T) = F(rho_S, rho_T) on normalized Choi states, its
// closed forms, the dilation (Uhlmann) form, and the property suite.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chanfid/channels.hpp"

namespace chanfid {

enum class FidelityRoute { ChoiState, ClosedFormIdentity, ClosedFormUnitary, Dilation };

std::string_view to_string(FidelityRoute route);

struct FidelityReport {
    double value = 0.0;
    FidelityRoute route = FidelityRoute::ChoiState;
    // Largest disagreement between the routes that were evaluated.
    double residual = 0.0;
};

/// Cross-route agreement required by channel_fidelity.
inline constexpr double kRouteAgreement = 1e-8;

/// F(rho_S, rho_T). Uses the unitary closed form when both channels are
/// unitarily implemented, the identity closed form when one of them is the
/// identity, and the Choi-state route otherwise; the dilation route is always
/// evaluated as a cross-check. Throws CertificateError when routes disagree
/// beyond kRouteAgreement.
FidelityReport channel_fidelity(const QuantumChannel& s, const QuantumChannel& t);

/// F(rho_S, rho_T) by the Choi-state route only.
double choi_fidelity(const QuantumChannel& s, const QuantumChannel& t);

/// (1/d^2) sum_a |tr V_a|^2.
double fidelity_to_identity(const QuantumChannel& t);

/// (1/d^2) |tr(U* V)|^2, after checking it against the reduction to
/// F(U*V, id).
double unitary_pair_fidelity(const ComplexMatrix& u, const ComplexMatrix& v);

/// (1/d^2) max over environment unitaries of |tr(V* (I (x) U_E) W)|^2,
/// evaluated exactly as (1/d^2) ||Tr_K(W V*)||_1^2 on a common environment.
double dilation_fidelity(const QuantumChannel& s, const QuantumChannel& t);

enum class CheckKind { Equality, AtLeast, Predicate };

struct PropertyCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    CheckKind kind = CheckKind::Predicate;

    /// Re-evaluates with min(tol, tolerance). Predicate checks keep `passed`.
    bool holds_within(double tol) const;
};

/// Inputs for the executable property list. Each property uses the fields it
/// names: CF1-CF3 and CF6-CF7 use (s, t); CF3 uses (u, v); CF4 uses
/// (s, t1, t2, lambda); CF5 uses (s1, s2, t1, t2); CF6 uses u; CF7 uses r.
struct PropertyInputs {
    QuantumChannel s;
    QuantumChannel t;
    QuantumChannel s1;
    QuantumChannel s2;
    QuantumChannel t1;
    QuantumChannel t2;
    QuantumChannel r;
    ComplexMatrix u;
    ComplexMatrix v;
    double lambda = 0.5;
};

/// Fills the auxiliary channels around a given pair: s1 = s, t1 = t, s2 and
/// t2 random with the same shape, r and u, v random on the output space.
/// Deterministic in `seed`.
PropertyInputs seeded_property_inputs(const QuantumChannel& s, const QuantumChannel& t,
                                      std::uint64_t seed);

std::vector<PropertyCheck> cf_property_suite(const PropertyInputs& in);

bool all_passed(const std::vector<PropertyCheck>& checks);

}  // namespace chanfid
