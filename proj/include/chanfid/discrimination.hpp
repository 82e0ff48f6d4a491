#pragma once

// Choosing the stopping time that best separates a family of Hamiltonian
// evolutions probed with half of a maximally entangled state.

#include <cstddef>
#include <utility>
#include <vector>

#include "chanfid/channels.hpp"

namespace chanfid {

/// Time-independent Hamiltonians H_m on a common d-dimensional space
/// (hbar = 1), probed on [0, horizon].
struct HamiltonianEnsemble {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> hamiltonians;
    double horizon = 0.0;
    std::size_t grid_points = 1024;

    /// Throws on non-Hermitian members, fewer than two members, or a
    /// non-positive horizon.
    void validate() const;
};

struct DiscriminationResult {
    double t_opt = 0.0;
    double f_opt = 1.0;
    std::pair<std::size_t, std::size_t> worst_pair{0, 1};
    std::vector<std::pair<double, double>> curve;  // (t, max pairwise fidelity)
};

/// F(U_m(t), U_n(t)) = (1/d^2) |tr(U_m(t)* U_n(t))|^2, U_m(t) = exp(-i H_m t).
double pairwise_fidelity_at(const HamiltonianEnsemble& ens, std::size_t m, std::size_t n, double t);

/// (1/d^2) |tr exp(-i (H_m - H_n) t)|^2; equal to pairwise_fidelity_at only
/// when [H_m, H_n] = 0.
double difference_exponent_fidelity(const HamiltonianEnsemble& ens, std::size_t m, std::size_t n,
                                    double t);

/// max over m != n of pairwise_fidelity_at, with the maximizing pair.
std::pair<double, std::pair<std::size_t, std::size_t>> max_pairwise_fidelity(
    const HamiltonianEnsemble& ens, double t);

/// Grid scan of the max-pairwise fidelity followed by golden-section
/// refinement inside the best grid bracket, down to width 1e-9 * horizon.
DiscriminationResult optimize_discrimination(const HamiltonianEnsemble& ens);

/// Probing restricted to t = n * tau, n = 0, 1, ..., floor(horizon / tau).
DiscriminationResult optimize_discrimination_discrete(const HamiltonianEnsemble& ens, double tau);

/// Channels acting once per time step: min over n = 1..n_max of the max
/// pairwise F(T_m^n, T_k^n). The curve holds (n, value).
DiscriminationResult discrete_channel_discrimination(const std::vector<QuantumChannel>& steps,
                                                     std::size_t n_max);

}  // namespace chanfid
