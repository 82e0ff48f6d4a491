#include "chanfid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "chanfid/errors.hpp"

namespace chanfid {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string shape_string(const ComplexMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

void require_square(const ComplexMatrix& m, const char* op) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionError(std::string(op) + ": expected a nonempty square matrix, got " +
                             shape_string(m));
    }
}

void require_shape(const ComplexMatrix& m, const SubsystemShape& shape, const char* op) {
    require_square(m, op);
    if (static_cast<std::size_t>(m.rows()) != shape.total()) {
        throw DimensionError(std::string(op) + ": subsystem dims multiply to " +
                             std::to_string(shape.total()) + " but matrix is " +
                             shape_string(m));
    }
}

// Row-major strides of the factors.
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

// Eigenvalues this close to zero are indistinguishable from it at double
// precision and are treated as exact zeros by the square-root routines.
double numerical_zero(const RealVector& values) {
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    return static_cast<double>(values.size()) * kEps * scale;
}

ComplexMatrix symmetrized(const ComplexMatrix& h, const char* op) {
    require_square(h, op);
    const double res = hermiticity_residual(h);
    if (res > tol::kHermitian) {
        std::ostringstream os;
        os << op << ": input is not Hermitian (||H - H*||_max = " << res << ")";
        throw InvalidInputError(os.str());
    }
    return (h + h.adjoint()) / 2.0;
}

}  // namespace

SubsystemShape::SubsystemShape(std::initializer_list<std::size_t> dims)
    : SubsystemShape(std::vector<std::size_t>(dims)) {}

SubsystemShape::SubsystemShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("SubsystemShape: no factors");
    for (auto d : dims_) {
        if (d == 0) throw DimensionError("SubsystemShape: zero-dimensional factor");
        total_ *= d;
    }
}

double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double atol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs(a - b) <= atol;
}

double hermiticity_residual(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(h - h.adjoint());
}

double isometry_residual(const ComplexMatrix& u) {
    if (u.rows() < u.cols()) return std::numeric_limits<double>::infinity();
    const auto n = u.cols();
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n));
}

bool is_unitary(const ComplexMatrix& u, double atol) {
    return u.rows() == u.cols() && isometry_residual(u) <= atol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, int n) {
    if (n < 1) throw DimensionError("kron_power: need at least one factor");
    ComplexMatrix out = a;
    for (int i = 1; i < n; ++i) out = kron(out, a);
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::span<const std::size_t> keep) {
    require_shape(m, shape, "partial_trace");
    const auto& dims = shape.dims();
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size() || kept[k]) {
            throw DimensionError("partial_trace: invalid or repeated factor index " +
                                 std::to_string(k));
        }
        kept[k] = true;
    }
    std::vector<std::size_t> keep_idx, trace_idx;
    for (std::size_t i = 0; i < dims.size(); ++i) (kept[i] ? keep_idx : trace_idx).push_back(i);

    const auto strides = strides_of(dims);
    auto offsets = [&](const std::vector<std::size_t>& factors) {
        // Flat offset contributed by every multi-index over `factors`, in
        // row-major order of those factors.
        std::vector<std::size_t> out{0};
        for (auto f : factors) {
            std::vector<std::size_t> next;
            next.reserve(out.size() * dims[f]);
            for (auto base : out) {
                for (std::size_t x = 0; x < dims[f]; ++x) next.push_back(base + x * strides[f]);
            }
            out = std::move(next);
        }
        return out;
    };
    const auto keep_off = offsets(keep_idx);
    const auto trace_off = offsets(trace_idx);

    const auto n = static_cast<Eigen::Index>(keep_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            Complex acc = 0.0;
            for (auto t : trace_off) {
                acc += m(static_cast<Eigen::Index>(keep_off[r] + t),
                         static_cast<Eigen::Index>(keep_off[c] + t));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemShape& shape,
                            std::initializer_list<std::size_t> keep) {
    return partial_trace(m, shape, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::span<const std::size_t> perm) {
    require_shape(m, shape, "permute_subsystems");
    const auto& dims = shape.dims();
    if (perm.size() != dims.size()) {
        throw DimensionError("permute_subsystems: permutation has " + std::to_string(perm.size()) +
                             " entries for " + std::to_string(dims.size()) + " factors");
    }
    std::vector<bool> seen(dims.size(), false);
    for (auto p : perm) {
        if (p >= dims.size() || seen[p]) {
            throw DimensionError("permute_subsystems: not a permutation");
        }
        seen[p] = true;
    }

    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t j = 0; j < dims.size(); ++j) new_dims[j] = dims[perm[j]];
    const auto old_strides = strides_of(dims);
    const auto new_strides = strides_of(new_dims);

    // old_of[n]: flat index in the input basis of new basis vector n.
    const std::size_t total = shape.total();
    std::vector<Eigen::Index> old_of(total);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n, old = 0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const std::size_t digit = rem / new_strides[j];
            rem %= new_strides[j];
            old += digit * old_strides[perm[j]];
        }
        old_of[n] = static_cast<Eigen::Index>(old);
    }

    const auto size = static_cast<Eigen::Index>(total);
    ComplexMatrix out(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
        for (Eigen::Index c = 0; c < size; ++c) out(r, c) = m(old_of[r], old_of[c]);
    }
    return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const SubsystemShape& shape,
                                 std::initializer_list<std::size_t> perm) {
    return permute_subsystems(m, shape, std::span<const std::size_t>(perm.begin(), perm.size()));
}

ComplexVector vectorize(const ComplexMatrix& a) {
    ComplexVector v(a.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
    }
    return v;
}

ComplexMatrix devectorize(const ComplexVector& v, std::size_t rows, std::size_t cols) {
    if (static_cast<std::size_t>(v.size()) != rows * cols) {
        throw DimensionError("devectorize: vector of length " + std::to_string(v.size()) +
                             " cannot fill " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    const auto r = static_cast<Eigen::Index>(rows), c = static_cast<Eigen::Index>(cols);
    ComplexMatrix a(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) a(i, j) = v(i * c + j);
    }
    return a;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hs_inner: shapes " + shape_string(a) + " and " + shape_string(b));
    }
    return (a.adjoint() * b).trace();
}

HermitianEigen herm_eig(const ComplexMatrix& h) {
    const ComplexMatrix sym = symmetrized(h, "herm_eig");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw CertificateError("herm_eig: eigensolver did not converge", 0.0);
    }
    HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        auto col = out.vectors.col(j);
        const double cut = 1e-12 * col.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > cut) {
                col *= std::conj(col(i)) / std::abs(col(i));
                col(i) = std::abs(col(i));
                break;
            }
        }
    }
    return out;
}

namespace {

ComplexMatrix psd_power(const ComplexMatrix& p, bool inverse, const char* op) {
    const auto eig = herm_eig(p);
    const double min_ev = eig.values.minCoeff();
    if (min_ev < -tol::kPsdClamp) {
        std::ostringstream os;
        os << op << ": matrix is not positive semidefinite (eigenvalue " << min_ev << ")";
        throw InvalidInputError(os.str());
    }
    const double zero = numerical_zero(eig.values);
    RealVector f(eig.values.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double lam = eig.values(i);
        if (lam <= zero) {
            f(i) = 0.0;
        } else {
            f(i) = inverse ? 1.0 / std::sqrt(lam) : std::sqrt(lam);
        }
    }
    return eig.vectors * f.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix& p) { return psd_power(p, false, "psd_sqrt"); }

ComplexMatrix psd_inverse_sqrt(const ComplexMatrix& p) {
    return psd_power(p, true, "psd_inverse_sqrt");
}

RealVector singular_values(const ComplexMatrix& a) {
    if (a.size() == 0) return RealVector{};
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues();
}

double trace_norm(const ComplexMatrix& a) { return singular_values(a).sum(); }

ComplexMatrix herm_exp(const ComplexMatrix& h, double t) {
    const auto eig = herm_eig(h);
    ComplexVector phases(eig.values.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::exp(Complex(0.0, -eig.values(i) * t));
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
    require_square(a, "polar_unitary");
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexVector basis_vector(std::size_t dim, std::size_t i) {
    if (i >= dim) throw DimensionError("basis_vector: index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
}

ComplexMatrix basis_projector(std::size_t dim, std::size_t i) {
    const auto v = basis_vector(dim, i);
    return v * v.adjoint();
}

}  // namespace chanfid
