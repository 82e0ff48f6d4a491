#pragma once

// Perfect discrimination of two qubit unitaries from N parallel uses: find
// the smallest N and an input |Psi> with <Psi|(U1* U2)^{(x)N}|Psi> = 0.

#include <optional>
#include <vector>

#include "chanfid/channels.hpp"

namespace chanfid {

/// For a copy count N whose phases e^{i(N-2k)theta} fit in an open half-plane:
/// the largest angular gap between consecutive phases exceeds pi.
struct HalfPlaneWitness {
    int n = 0;
    double max_gap = 0.0;
};

struct AcinResult {
    int n0 = 0;
    double theta = 0.0;               // eigenphases of det-normalized U1* U2 are +-theta
    std::vector<int> support;         // k values (number of "-theta" factors) used in Psi
    std::vector<double> weights;      // convex weights x_k on the support
    PureState psi;                    // on the 2^n0-dimensional space
    double residual = 0.0;            // |<Psi|(U1* U2)^{(x)n0}|Psi>|
    double fidelity_after = 0.0;      // F(U1^{(x)n0} o T_Psi, U2^{(x)n0} o T_Psi)
    std::vector<HalfPlaneWitness> excluded;  // certificates for N = 1..n0-1
};

struct AcinSearch {
    std::optional<AcinResult> found;
    // On failure: one certificate per N = 1..n_max.
    std::vector<HalfPlaneWitness> excluded;
};

/// True when 0 lies in the convex hull of the unit-circle points at the given
/// angles; otherwise `max_gap` receives the witness gap (> pi).
bool origin_in_hull(const std::vector<double>& angles, double* max_gap = nullptr);

/// Searches N = 1..n_max (n_max <= 20). Throws InvalidInputError when the
/// inputs are not 2x2 unitaries or coincide up to a phase, and
/// CertificateError when the assembled state misses its 1e-9 residual.
AcinSearch acin_search(const ComplexMatrix& u1, const ComplexMatrix& u2, int n_max = 20);

struct TensorPowerFidelity {
    double value = 0.0;        // F(U1, U2)^N
    bool cross_checked = false;
    double residual = 0.0;     // |value - F(U1^{(x)N}, U2^{(x)N})| when cross-checked
};

/// F(U1^{(x)N}, U2^{(x)N}) = F(U1, U2)^N, cross-checked against the explicit
/// tensor-power channels for N <= 4.
TensorPowerFidelity tensor_power_fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2, int n);

}  // namespace chanfid
