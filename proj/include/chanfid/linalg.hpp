#pragma once

// Dense complex linear algebra and the vectorization ("double ket") calculus
// used by every other part of the library.
//
// Conventions:
//  * Tensor products put the left factor on the slow index.
//  * vectorize(A) lists A row by row, so that for A : H -> K the output
//    index is slow and |A>> lives in K (x) H.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chanfid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// ||H - H*||_max accepted (and symmetrized away) for Hermitian inputs.
inline constexpr double kHermitian = 1e-8;
// Eigenvalues in [-kPsdClamp, 0) are roundoff and clamp to zero.
inline constexpr double kPsdClamp = 1e-10;
inline constexpr double kTraceOne = 1e-9;
inline constexpr double kUnitNorm = 1e-10;
// Sum_a V_a* V_a = I within this, max-norm.
inline constexpr double kCompleteness = 1e-8;
inline constexpr double kUnitary = 1e-8;
// Choi eigenvalues at or below this carry no Kraus operator.
inline constexpr double kKrausCutoff = 1e-10;
}  // namespace tol

/// Tensor-factor dimensions of a composite space, leftmost factor first.
class SubsystemShape {
public:
    SubsystemShape(std::initializer_list<std::size_t> dims);
    explicit SubsystemShape(std::vector<std::size_t> dims);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return dims_.size(); }
    std::size_t total() const noexcept { return total_; }
    std::size_t operator[](std::size_t i) const { return dims_.at(i); }

private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

/// Spectral decomposition H = Q diag(values) Q*, values ascending.
struct HermitianEigen {
    RealVector values;
    ComplexMatrix vectors;
};

double max_abs(const ComplexMatrix& a);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double atol);

/// ||H - H*||_max.
double hermiticity_residual(const ComplexMatrix& h);
/// ||U*U - I||_max (square U) or the isometry residual for tall U.
double isometry_residual(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double atol = tol::kUnitary);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// a (x) a (x) ... (x) a, n >= 1 factors.
ComplexMatrix kron_power(const ComplexMatrix& a, int n);

/// Traces out every factor of `shape` not listed in `keep`. Kept factors
/// retain their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::initializer_list<std::size_t> keep);

/// Conjugation by the factor permutation: factor j of the result is factor
/// perm[j] of the input.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::span<const std::size_t> perm);
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::initializer_list<std::size_t> perm);

ComplexVector vectorize(const ComplexMatrix& a);
ComplexMatrix devectorize(const ComplexVector& v, std::size_t rows, std::size_t cols);

/// tr(A* B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Symmetrizes within tol::kHermitian, then diagonalizes. Each eigenvector
/// is phase-fixed so its first non-negligible component is real positive.
HermitianEigen herm_eig(const ComplexMatrix& h);

/// Unique PSD square root. Throws InvalidInputError on an eigenvalue below
/// -tol::kPsdClamp.
ComplexMatrix psd_sqrt(const ComplexMatrix& p);

/// Moore-Penrose inverse square root of a PSD matrix (zero on its kernel).
ComplexMatrix psd_inverse_sqrt(const ComplexMatrix& p);

/// Sum of singular values. Rectangular input allowed.
double trace_norm(const ComplexMatrix& a);
RealVector singular_values(const ComplexMatrix& a);

/// exp(-i H t) for Hermitian H.
ComplexMatrix herm_exp(const ComplexMatrix& h, double t);

/// Unitary factor W of the polar decomposition A = W |A| (square A).
ComplexMatrix polar_unitary(const ComplexMatrix& a);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix basis_projector(std::size_t dim, std::size_t i);
ComplexVector basis_vector(std::size_t dim, std::size_t i);

}  // namespace chanfid
