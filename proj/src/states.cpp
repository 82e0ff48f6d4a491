#include "chanfid/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanfid/errors.hpp"

namespace chanfid {

namespace {

constexpr double kRouteAgreement = 1e-9;
constexpr double kClampWindow = 1e-9;
constexpr double kPovmCompleteness = 1e-8;
constexpr double kOptimalPovmCertificate = 1e-6;
// Eigenvalues of sigma above this span its support in optimal_povm.
constexpr double kSupportCutoff = 1e-12;

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(op) + ": dimensions " + std::to_string(a.dim()) +
                             " and " + std::to_string(b.dim()) + " differ");
    }
}

double clamp_unit(double f, const char* op) {
    if (f < -kClampWindow || f > 1.0 + kClampWindow) {
        std::ostringstream os;
        os << op << ": value " << f << " outside [0, 1] beyond roundoff";
        throw CertificateError(os.str(), f < 0 ? -f : f - 1.0);
    }
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionError("DensityMatrix: expected a nonempty square matrix");
    }
    const double herm = hermiticity_residual(m);
    if (herm > tol::kHermitian) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (residual " << herm << ")";
        throw InvalidInputError(os.str());
    }
    matrix_ = (m + m.adjoint()) / 2.0;
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::kTraceOne) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr << " differs from 1";
        throw InvalidInputError(os.str());
    }
    const double min_ev = herm_eig(matrix_).values.minCoeff();
    if (min_ev < -tol::kPsdClamp) {
        std::ostringstream os;
        os << "DensityMatrix: negative eigenvalue " << min_ev;
        throw InvalidInputError(os.str());
    }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t i) {
    return DensityMatrix(basis_projector(dim, i));
}

PureState::PureState(const ComplexVector& amplitudes) : amplitudes_(amplitudes) {
    if (amplitudes_.size() == 0) throw DimensionError("PureState: empty amplitude vector");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol::kUnitNorm) {
        std::ostringstream os;
        os << "PureState: norm " << norm << " differs from 1";
        throw InvalidInputError(os.str());
    }
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidInputError("Povm: no elements");
    const auto n = elements_.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (auto& e : elements_) {
        if (e.rows() != n || e.cols() != n) throw DimensionError("Povm: inconsistent element shapes");
        if (hermiticity_residual(e) > tol::kHermitian) {
            throw InvalidInputError("Povm: element is not Hermitian");
        }
        e = (e + e.adjoint()) / 2.0;
        if (herm_eig(e).values.minCoeff() < -tol::kPsdClamp) {
            throw InvalidInputError("Povm: element is not positive semidefinite");
        }
        sum += e;
    }
    const double res = max_abs(sum - ComplexMatrix::Identity(n, n));
    if (res > kPovmCompleteness) {
        std::ostringstream os;
        os << "Povm: elements sum to identity only within " << res;
        throw InvalidInputError(os.str());
    }
}

Povm Povm::from_basis(const ComplexMatrix& unitary) {
    std::vector<ComplexMatrix> elems;
    elems.reserve(static_cast<std::size_t>(unitary.cols()));
    for (Eigen::Index j = 0; j < unitary.cols(); ++j) {
        elems.push_back(unitary.col(j) * unitary.col(j).adjoint());
    }
    return Povm(std::move(elems));
}

FidelityRoutes fidelity_routes(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "state_fidelity");
    const ComplexMatrix sr = psd_sqrt(rho.matrix());
    const ComplexMatrix ss = psd_sqrt(sigma.matrix());
    const ComplexMatrix inner = sr * sigma.matrix() * sr;
    const double nested = psd_sqrt((inner + inner.adjoint()) / 2.0).trace().real();
    const double tn = trace_norm(sr * ss);
    return {nested * nested, tn * tn};
}

double state_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const auto routes = fidelity_routes(rho, sigma);
    const double gap = std::abs(routes.nested_root - routes.trace_norm);
    if (gap > kRouteAgreement) {
        std::ostringstream os;
        os << "state_fidelity: nested-root and trace-norm routes disagree by " << gap;
        throw CertificateError(os.str(), gap);
    }
    return clamp_unit(routes.trace_norm, "state_fidelity");
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "trace_distance");
    return trace_norm(rho.matrix() - sigma.matrix());
}

PureState purify(const DensityMatrix& rho) {
    const auto eig = herm_eig(rho.matrix());
    const auto d = static_cast<Eigen::Index>(rho.dim());
    // amplitude matrix A = sum_i sqrt(lambda_i) |v_i><e_i|, so |psi> = |A>>
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double lam = std::max(eig.values(i), 0.0);
        a.col(i) = std::sqrt(lam) * eig.vectors.col(i);
    }
    ComplexVector psi = vectorize(a);
    psi /= psi.norm();
    return PureState(psi);
}

UhlmannWitness uhlmann_witness(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "uhlmann_overlap");
    const auto d = rho.dim();
    const PureState pr = purify(rho);
    const PureState ps = purify(sigma);
    // <pr| (I (x) U) |ps> = tr(A* B U^T); the maximum over U is ||A* B||_1,
    // attained at U^T = polar(A* B)*.
    const ComplexMatrix a = devectorize(pr.amplitudes(), d, d);
    const ComplexMatrix b = devectorize(ps.amplitudes(), d, d);
    const ComplexMatrix w = polar_unitary(a.adjoint() * b);
    const ComplexMatrix u = w.adjoint().transpose();
    const auto n = static_cast<Eigen::Index>(d);
    const ComplexVector rotated = kron(ComplexMatrix::Identity(n, n), u) * ps.amplitudes();
    const double overlap = std::norm(pr.amplitudes().dot(rotated));
    return {pr, PureState(rotated / rotated.norm()), u, clamp_unit(overlap, "uhlmann_overlap")};
}

double uhlmann_overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return uhlmann_witness(rho, sigma).overlap;
}

double povm_statistic(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& povm) {
    require_same_dim(rho, sigma, "povm_statistic");
    if (povm.dim() != rho.dim()) throw DimensionError("povm_statistic: POVM dimension mismatch");
    double total = 0.0;
    for (const auto& e : povm.elements()) {
        const double p = std::max(0.0, (rho.matrix() * e).trace().real());
        const double q = std::max(0.0, (sigma.matrix() * e).trace().real());
        total += std::sqrt(p * q);
    }
    return total;
}

Povm optimal_povm(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma, "optimal_povm");
    const auto n = static_cast<Eigen::Index>(rho.dim());

    // Restrict to the support of sigma: outcomes on its kernel contribute
    // nothing to the statistic. On the support,
    //   M = sigma^{-1/2} sqrt(sigma^{1/2} rho sigma^{1/2}) sigma^{-1/2}
    // and measuring in M's eigenbasis attains sqrt(F).
    const auto se = herm_eig(sigma.matrix());
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (se.values(i) > kSupportCutoff) support.push_back(i);
    }
    const auto r = static_cast<Eigen::Index>(support.size());
    ComplexMatrix q(n, r);
    for (Eigen::Index j = 0; j < r; ++j) q.col(j) = se.vectors.col(support[static_cast<std::size_t>(j)]);

    const ComplexMatrix s_half = psd_sqrt(sigma.matrix());
    const ComplexMatrix s_inv_half = psd_inverse_sqrt(sigma.matrix());
    const ComplexMatrix mid = s_half * rho.matrix() * s_half;
    const ComplexMatrix m = s_inv_half * psd_sqrt((mid + mid.adjoint()) / 2.0) * s_inv_half;
    const ComplexMatrix m_support = q.adjoint() * m * q;
    const auto me = herm_eig((m_support + m_support.adjoint()) / 2.0);

    std::vector<ComplexMatrix> elems;
    const ComplexMatrix basis = q * me.vectors;
    for (Eigen::Index j = 0; j < r; ++j) elems.push_back(basis.col(j) * basis.col(j).adjoint());
    if (r < n) {
        const ComplexMatrix kernel = ComplexMatrix::Identity(n, n) - q * q.adjoint();
        elems.push_back((kernel + kernel.adjoint()) / 2.0);
    }
    Povm povm(std::move(elems));

    const double target = std::sqrt(state_fidelity(rho, sigma));
    const double gap = std::abs(povm_statistic(rho, sigma, povm) - target);
    if (gap > kOptimalPovmCertificate) {
        std::ostringstream os;
        os << "optimal_povm: achieved statistic misses sqrt(F) by " << gap;
        throw CertificateError(os.str(), gap);
    }
    return povm;
}

}  // namespace chanfid
