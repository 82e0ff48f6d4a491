#pragma once

// Density operators, pure states, POVMs and the (squared, Jozsa) fidelity.

#include <cstddef>
#include <vector>

#include "chanfid/linalg.hpp"

namespace chanfid {

/// Positive semidefinite, unit-trace operator. Construction validates and
/// symmetrizes; an instance always satisfies the invariants.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    static DensityMatrix maximally_mixed(std::size_t dim);
    static DensityMatrix basis_state(std::size_t dim, std::size_t i);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    ComplexMatrix matrix_;
};

class PureState {
public:
    explicit PureState(const ComplexVector& amplitudes);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }
    DensityMatrix density() const { return DensityMatrix(projector()); }

private:
    ComplexVector amplitudes_;
};

class Povm {
public:
    explicit Povm(std::vector<ComplexMatrix> elements);

    /// Projective measurement onto the columns of a unitary.
    static Povm from_basis(const ComplexMatrix& unitary);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }
    const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }

private:
    std::vector<ComplexMatrix> elements_;
};

/// The two evaluations of F(rho, sigma) kept side by side.
struct FidelityRoutes {
    double nested_root;  // (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
    double trace_norm;   // ||sqrt(rho) sqrt(sigma)||_1^2
};

FidelityRoutes fidelity_routes(const DensityMatrix& rho, const DensityMatrix& sigma);

/// F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
/// Throws CertificateError when the two routes differ by more than 1e-9.
double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sum_i sqrt(lambda_i) |v_i> (x) |e_i> from the spectral decomposition.
PureState purify(const DensityMatrix& rho);

/// Maximizing purification pair for the Uhlmann overlap: psi_rho = purify(rho)
/// and psi_sigma = (I (x) environment_unitary) purify(sigma).
struct UhlmannWitness {
    PureState psi_rho;
    PureState psi_sigma;
    ComplexMatrix environment_unitary;
    double overlap;  // |<psi_rho|psi_sigma>|^2
};

UhlmannWitness uhlmann_witness(const DensityMatrix& rho, const DensityMatrix& sigma);
double uhlmann_overlap(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sum_m sqrt(tr(rho F_m) tr(sigma F_m)); never below sqrt(F(rho, sigma)).
double povm_statistic(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& povm);

/// Projective measurement attaining povm_statistic = sqrt(F) (certified to
/// 1e-6, CertificateError carries the gap otherwise).
Povm optimal_povm(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace chanfid
