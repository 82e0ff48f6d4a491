#pragma once

// Certified lower-bound estimators related to the cb-norm (diamond norm)
// distance, and the inequality chains linking them to the channel fidelity.
// No exact cb-norm is computed anywhere: every estimator returns a value
// attained by an explicit input state, so it can only under-estimate.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chanfid/channels.hpp"

namespace chanfid {

struct EstimatorBudget {
    int restarts = 64;
    int ascent_steps = 200;
    std::uint64_t seed = 0;
};

/// max over the candidate inputs psi on H (x) H of
/// ||((S - T) (x) id)(|psi><psi|)||_1. The maximally entangled input is always
/// the first candidate; the rest are seeded random inputs refined by
/// alternating sign-operator / top-eigenvector ascent. Restart i depends only
/// on (seed, i), so the result is nondecreasing in `restarts`.
double diamond_lower_bound(const QuantumChannel& s, const QuantumChannel& t,
                           const EstimatorBudget& budget = {});

/// ||((S - T) (x) id)(|psi><psi|)||_1 for one input.
double diamond_objective(const QuantumChannel& s, const QuantumChannel& t,
                         const ComplexVector& psi);

/// Lower bound on sup_{psi, phi} Re <phi| T(|phi><psi|) |psi> by seeded
/// multi-start alternating ascent; the first candidates are the basis states.
double off_diagonal_fidelity_lb(const QuantumChannel& t, const EstimatorBudget& budget = {});

/// Re <phi| T(|phi><psi|) |psi>.
double off_diagonal_objective(const QuantumChannel& t, const ComplexVector& phi,
                              const ComplexVector& psi);

struct Inequality {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    // Informational entries are reported but never asserted.
    bool asserted = true;
};

struct BoundReport {
    double fid = 0.0;                  // F(S, T)
    double choi_trace_distance = 0.0;  // ||rho_S - rho_T||_1
    double diamond_lb = 0.0;           // lower bound on ||S - T||_cb
    double fid_to_identity = 0.0;      // F(T, id), square T only
    double diamond_lb_identity = 0.0;  // lower bound on ||T - id||_cb, square T only
    double offdiag_lb = 0.0;           // lower bound on F_%(T), square T only
    std::vector<Inequality> inequalities;

    bool asserted_hold() const;
};

inline constexpr double kBoundSlack = 1e-9;
// The square-root upper bound is only asserted below this input dimension.
inline constexpr std::size_t kUpperBoundMaxDim = 15;

/// Evaluates
///   (i)   2 - 2 sqrt(F(S,T)) <= ||rho_S - rho_T||_1
///   (ii)  lb ||T - id||_cb <= 4 sqrt(1 - F(T, id))
///   (iii) F(T, id) <= 1 - (lb ||T - id||_cb)^2 / 16
///   (iv)  (1 - lb/2)^2 <= F(T, id)   [informational]
/// each with kBoundSlack. (ii)-(iv) need d_in = d_out; (ii) and (iii) are
/// informational from kUpperBoundMaxDim on.
BoundReport bound_suite(const QuantumChannel& s, const QuantumChannel& t,
                        const EstimatorBudget& budget = {});

}  // namespace chanfid
