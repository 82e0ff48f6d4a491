#pragma once

// Channel representations (Kraus, Choi, Stinespring) and conversions between
// them.
//
// A channel T : S(H) -> S(K) with d = dim H and d' = dim K. Its Choi operator
// R_T = (T (x) id)|phi+><phi+| lives on K (x) H with K as the first factor,
// and equals sum_a |V_a>><<V_a| for any Kraus set {V_a}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chanfid/linalg.hpp"
#include "chanfid/states.hpp"

namespace chanfid {

/// Residuals of a candidate Kraus set. All are max-norm.
struct ChannelDiagnostics {
    double completeness_residual = 0.0;  // ||sum V* V - I||
    double choi_psd_residual = 0.0;      // max(0, -lambda_min(R))
    double choi_trace_residual = 0.0;    // ||Tr_K R - I||

    bool valid(double tol = tol::kCompleteness) const;
};

ChannelDiagnostics diagnose_kraus(std::span<const ComplexMatrix> kraus);

/// Completely positive trace-preserving map held as a Kraus list.
class QuantumChannel {
public:
    /// Throws InvalidInputError naming the failed residual when the Kraus set
    /// is incomplete beyond tol::kCompleteness.
    explicit QuantumChannel(std::vector<ComplexMatrix> kraus);

    std::size_t dim_in() const noexcept { return dim_in_; }
    std::size_t dim_out() const noexcept { return dim_out_; }
    const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

private:
    std::size_t dim_in_ = 0;
    std::size_t dim_out_ = 0;
    std::vector<ComplexMatrix> kraus_;
};

class ChoiOperator {
public:
    /// Validates PSD and Tr_K R = I_d.
    ChoiOperator(std::size_t dim_in, std::size_t dim_out, const ComplexMatrix& matrix);

    std::size_t dim_in() const noexcept { return dim_in_; }
    std::size_t dim_out() const noexcept { return dim_out_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    /// rho_T = R_T / d.
    const DensityMatrix& normalized_state() const noexcept { return state_; }

private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    ComplexMatrix matrix_;
    DensityMatrix state_;
};

/// Isometry V : H -> K (x) E, row index k * dim_env + a.
class StinespringIsometry {
public:
    StinespringIsometry(std::size_t dim_in, std::size_t dim_out, std::size_t dim_env,
                        ComplexMatrix matrix);

    std::size_t dim_in() const noexcept { return dim_in_; }
    std::size_t dim_out() const noexcept { return dim_out_; }
    std::size_t dim_env() const noexcept { return dim_env_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

    /// V* (X (x) I_E) V.
    ComplexMatrix dual_apply(const ComplexMatrix& x) const;

private:
    std::size_t dim_in_;
    std::size_t dim_out_;
    std::size_t dim_env_;
    ComplexMatrix matrix_;
};

ChannelDiagnostics validate(const QuantumChannel& ch);

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho);
/// Tr_H[(I (x) rho^T) R_T], the partial trace over the second factor.
DensityMatrix apply_via_choi(const ChoiOperator& choi, const DensityMatrix& rho);

/// Action on an arbitrary operator (linear extension of apply).
ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& x);
/// (T (x) id_n) on an operator of K (x) C^n, n = x.rows() / dim_in.
ComplexMatrix apply_extended(const QuantumChannel& ch, const ComplexMatrix& x);

ChoiOperator choi(const QuantumChannel& ch);
/// R_T computed literally as (T (x) id)|phi+><phi+|.
ComplexMatrix choi_from_action(const QuantumChannel& ch);

/// Kraus operators sqrt(r_a) * devectorize(v_a) from the spectral
/// decomposition of R_T, largest eigenvalue first; eigenvalues at or below
/// tol::kKrausCutoff are dropped.
QuantumChannel kraus_from_choi(const ChoiOperator& choi);

/// Heisenberg picture: sum_a V_a* X V_a.
ComplexMatrix dual_apply(const QuantumChannel& ch, const ComplexMatrix& x);

/// V|psi> = sum_a V_a|psi> (x) |e_a>. Optional padding with zero Kraus
/// operators up to `dim_env`.
StinespringIsometry stinespring(const QuantumChannel& ch, std::optional<std::size_t> dim_env = {});

/// Kraus set {A_i B_j}: first `before`, then `after`.
QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before);
/// Kraus set {A_i (x) B_j}.
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);
/// lambda * a + (1 - lambda) * b as the Kraus union {sqrt(lambda) A_i} u {sqrt(1-lambda) B_j}.
QuantumChannel mixture(double lambda, const QuantumChannel& a, const QuantumChannel& b);
/// Re-expresses a channel with its minimal Kraus set (via the Choi operator).
QuantumChannel compress(const QuantumChannel& ch);

/// Choi operator of a (x) b assembled as the interleaved product
/// K1 H1 K2 H2 -> K1 K2 H1 H2 of the factor Choi operators.
ComplexMatrix tensor_choi(const ChoiOperator& a, const ChoiOperator& b);

QuantumChannel identity_channel(std::size_t dim);
QuantumChannel unitary_channel(const ComplexMatrix& u);
/// rho -> (1 - p) rho + p I / d, realized with the generalized Pauli
/// (Weyl) basis.
QuantumChannel depolarizing(std::size_t dim, double p);
/// Prepares |psi>: Kraus {|psi><e_i|}.
QuantumChannel constant_channel(std::size_t dim_in, const PureState& psi);
/// Haar-random Stinespring isometry H -> K (x) C^rank split into Kraus
/// operators; deterministic in `seed`.
QuantumChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t rank,
                              std::uint64_t seed);
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

/// U when the channel is unitarily implemented (its Choi state is pure),
/// phase-fixed so that the first non-negligible entry of |U>> is positive.
std::optional<ComplexMatrix> unitary_of(const QuantumChannel& ch);
bool is_identity(const QuantumChannel& ch);

}  // namespace chanfid
