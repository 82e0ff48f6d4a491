#include "chanfid/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanfid/errors.hpp"
#include "chanfid/random.hpp"

namespace chanfid {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

ComplexMatrix eye(std::size_t n) { return ComplexMatrix::Identity(idx(n), idx(n)); }

void require_dim(std::size_t got, std::size_t want, const char* op, const char* what) {
    if (got != want) {
        std::ostringstream os;
        os << op << ": " << what << " dimension " << got << ", expected " << want;
        throw DimensionError(os.str());
    }
}

ComplexMatrix choi_sum(std::span<const ComplexMatrix> kraus) {
    const auto n = kraus.front().size();
    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (const auto& v : kraus) {
        const ComplexVector vv = vectorize(v);
        r.noalias() += vv * vv.adjoint();
    }
    return r;
}

// Phase so that the first non-negligible entry (row-major) is real positive.
ComplexMatrix phase_fixed(const ComplexMatrix& u) {
    const ComplexVector v = vectorize(u);
    const double cut = 1e-12 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > cut) return u * (std::conj(v(i)) / std::abs(v(i)));
    }
    return u;
}

}  // namespace

bool ChannelDiagnostics::valid(double tol) const {
    return completeness_residual <= tol && choi_psd_residual <= tol && choi_trace_residual <= tol;
}

ChannelDiagnostics diagnose_kraus(std::span<const ComplexMatrix> kraus) {
    if (kraus.empty()) throw InvalidInputError("channel: empty Kraus list");
    const auto rows = kraus.front().rows();
    const auto cols = kraus.front().cols();
    if (rows == 0 || cols == 0) throw DimensionError("channel: zero-sized Kraus operator");
    ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
    for (const auto& v : kraus) {
        if (v.rows() != rows || v.cols() != cols) {
            throw DimensionError("channel: Kraus operators of differing shapes");
        }
        sum.noalias() += v.adjoint() * v;
    }
    ChannelDiagnostics diag;
    diag.completeness_residual = max_abs(sum - ComplexMatrix::Identity(cols, cols));
    const ComplexMatrix r = choi_sum(kraus);
    diag.choi_psd_residual = std::max(0.0, -herm_eig(r).values.minCoeff());
    const SubsystemShape shape{static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
    diag.choi_trace_residual =
        max_abs(partial_trace(r, shape, {1}) - ComplexMatrix::Identity(cols, cols));
    return diag;
}

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw InvalidInputError("QuantumChannel: empty Kraus list");
    const auto rows = kraus_.front().rows();
    const auto cols = kraus_.front().cols();
    if (rows == 0 || cols == 0) throw DimensionError("QuantumChannel: zero-sized Kraus operator");
    ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
    for (const auto& v : kraus_) {
        if (v.rows() != rows || v.cols() != cols) {
            throw DimensionError("QuantumChannel: Kraus operators of differing shapes");
        }
        sum.noalias() += v.adjoint() * v;
    }
    const double res = max_abs(sum - ComplexMatrix::Identity(cols, cols));
    if (res > tol::kCompleteness) {
        std::ostringstream os;
        os << "QuantumChannel: completeness residual ||sum V*V - I||_max = " << res
           << " exceeds " << tol::kCompleteness;
        throw InvalidInputError(os.str());
    }
    dim_in_ = static_cast<std::size_t>(cols);
    dim_out_ = static_cast<std::size_t>(rows);
}

namespace {

ComplexMatrix validated_choi(std::size_t dim_in, std::size_t dim_out, const ComplexMatrix& matrix) {
    if (dim_in == 0 || dim_out == 0) throw DimensionError("ChoiOperator: zero dimension");
    if (matrix.rows() != idx(dim_in * dim_out) || matrix.cols() != idx(dim_in * dim_out)) {
        throw DimensionError("ChoiOperator: matrix is not (d_out*d_in) square");
    }
    if (hermiticity_residual(matrix) > tol::kHermitian) {
        throw InvalidInputError("ChoiOperator: matrix is not Hermitian");
    }
    const ComplexMatrix sym = (matrix + matrix.adjoint()) / 2.0;
    const double min_ev = herm_eig(sym).values.minCoeff();
    if (min_ev < -tol::kCompleteness) {
        std::ostringstream os;
        os << "ChoiOperator: not positive semidefinite (eigenvalue " << min_ev << ")";
        throw InvalidInputError(os.str());
    }
    const double tp =
        max_abs(partial_trace(sym, SubsystemShape{dim_out, dim_in}, {1}) - eye(dim_in));
    if (tp > tol::kCompleteness) {
        std::ostringstream os;
        os << "ChoiOperator: trace-preservation residual ||Tr_K R - I||_max = " << tp;
        throw InvalidInputError(os.str());
    }
    return sym;
}

DensityMatrix normalized_choi_state(const ComplexMatrix& r, std::size_t dim_in) {
    ComplexMatrix state = r / static_cast<double>(dim_in);
    auto eig = herm_eig(state);
    if (eig.values.minCoeff() >= -tol::kPsdClamp) return DensityMatrix(state);
    // Roundoff-level negative eigenvalues are projected out so the state
    // satisfies the density-matrix invariants.
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        eig.values(i) = std::max(eig.values(i), 0.0);
    }
    state = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    return DensityMatrix(state / state.trace().real());
}

}  // namespace

ChoiOperator::ChoiOperator(std::size_t dim_in, std::size_t dim_out, const ComplexMatrix& matrix)
    : dim_in_(dim_in),
      dim_out_(dim_out),
      matrix_(validated_choi(dim_in, dim_out, matrix)),
      state_(normalized_choi_state(matrix_, dim_in)) {}

StinespringIsometry::StinespringIsometry(std::size_t dim_in, std::size_t dim_out,
                                         std::size_t dim_env, ComplexMatrix matrix)
    : dim_in_(dim_in), dim_out_(dim_out), dim_env_(dim_env), matrix_(std::move(matrix)) {
    if (matrix_.rows() != idx(dim_out * dim_env) || matrix_.cols() != idx(dim_in)) {
        throw DimensionError("StinespringIsometry: matrix is not (d_out*n) x d_in");
    }
    const double res = isometry_residual(matrix_);
    if (res > tol::kCompleteness) {
        std::ostringstream os;
        os << "StinespringIsometry: ||V*V - I||_max = " << res;
        throw InvalidInputError(os.str());
    }
}

ComplexMatrix StinespringIsometry::dual_apply(const ComplexMatrix& x) const {
    require_dim(static_cast<std::size_t>(x.rows()), dim_out_, "StinespringIsometry::dual_apply",
                "observable");
    return matrix_.adjoint() * kron(x, eye(dim_env_)) * matrix_;
}

ChannelDiagnostics validate(const QuantumChannel& ch) { return diagnose_kraus(ch.kraus()); }

ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& x) {
    if (x.rows() != idx(ch.dim_in()) || x.cols() != idx(ch.dim_in())) {
        throw DimensionError("apply: operator does not match the channel input dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(idx(ch.dim_out()), idx(ch.dim_out()));
    for (const auto& v : ch.kraus()) out.noalias() += v * x * v.adjoint();
    return out;
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho) {
    require_dim(rho.dim(), ch.dim_in(), "apply", "state");
    return DensityMatrix(apply_linear(ch, rho.matrix()));
}

ComplexMatrix apply_extended(const QuantumChannel& ch, const ComplexMatrix& x) {
    if (x.rows() != x.cols() || x.rows() % idx(ch.dim_in()) != 0) {
        throw DimensionError("apply_extended: operator size is not a multiple of d_in");
    }
    const auto n = static_cast<std::size_t>(x.rows()) / ch.dim_in();
    const ComplexMatrix id = eye(n);
    const auto m = idx(ch.dim_out() * n);
    ComplexMatrix out = ComplexMatrix::Zero(m, m);
    for (const auto& v : ch.kraus()) {
        const ComplexMatrix vx = kron(v, id);
        out.noalias() += vx * x * vx.adjoint();
    }
    return out;
}

DensityMatrix apply_via_choi(const ChoiOperator& c, const DensityMatrix& rho) {
    require_dim(rho.dim(), c.dim_in(), "apply_via_choi", "state");
    const ComplexMatrix lifted = kron(eye(c.dim_out()), rho.matrix().transpose()) * c.matrix();
    return DensityMatrix(partial_trace(lifted, SubsystemShape{c.dim_out(), c.dim_in()}, {0}));
}

ChoiOperator choi(const QuantumChannel& ch) {
    return ChoiOperator(ch.dim_in(), ch.dim_out(), choi_sum(ch.kraus()));
}

ComplexMatrix choi_from_action(const QuantumChannel& ch) {
    const ComplexVector phi = vectorize(eye(ch.dim_in()));
    return apply_extended(ch, phi * phi.adjoint());
}

QuantumChannel kraus_from_choi(const ChoiOperator& c) {
    const auto eig = herm_eig(c.matrix());
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index i = eig.values.size(); i-- > 0;) {
        const double r = eig.values(i);
        if (r <= tol::kKrausCutoff) break;
        kraus.push_back(std::sqrt(r) * devectorize(eig.vectors.col(i), c.dim_out(), c.dim_in()));
    }
    if (kraus.empty()) throw InvalidInputError("kraus_from_choi: Choi operator has no support");
    return QuantumChannel(std::move(kraus));
}

ComplexMatrix dual_apply(const QuantumChannel& ch, const ComplexMatrix& x) {
    if (x.rows() != idx(ch.dim_out()) || x.cols() != idx(ch.dim_out())) {
        throw DimensionError("dual_apply: observable does not match the channel output dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(idx(ch.dim_in()), idx(ch.dim_in()));
    for (const auto& v : ch.kraus()) out.noalias() += v.adjoint() * x * v;
    return out;
}

StinespringIsometry stinespring(const QuantumChannel& ch, std::optional<std::size_t> dim_env) {
    const std::size_t count = ch.kraus().size();
    const std::size_t n = dim_env.value_or(count);
    if (n < count) throw DimensionError("stinespring: environment smaller than the Kraus count");
    const auto d_out = idx(ch.dim_out());
    ComplexMatrix v = ComplexMatrix::Zero(idx(ch.dim_out() * n), idx(ch.dim_in()));
    for (std::size_t a = 0; a < count; ++a) {
        const auto& k = ch.kraus()[a];
        for (Eigen::Index row = 0; row < d_out; ++row) {
            v.row(row * idx(n) + idx(a)) = k.row(row);
        }
    }
    return StinespringIsometry(ch.dim_in(), ch.dim_out(), n, std::move(v));
}

QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before) {
    require_dim(after.dim_in(), before.dim_out(), "compose", "intermediate");
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(after.kraus().size() * before.kraus().size());
    for (const auto& a : after.kraus()) {
        for (const auto& b : before.kraus()) kraus.push_back(a * b);
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(a.kraus().size() * b.kraus().size());
    for (const auto& x : a.kraus()) {
        for (const auto& y : b.kraus()) kraus.push_back(kron(x, y));
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel mixture(double lambda, const QuantumChannel& a, const QuantumChannel& b) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInputError("mixture: lambda outside [0, 1]");
    require_dim(a.dim_in(), b.dim_in(), "mixture", "input");
    require_dim(a.dim_out(), b.dim_out(), "mixture", "output");
    std::vector<ComplexMatrix> kraus;
    const double wa = std::sqrt(lambda), wb = std::sqrt(1.0 - lambda);
    if (wa > 0.0) {
        for (const auto& x : a.kraus()) kraus.push_back(wa * x);
    }
    if (wb > 0.0) {
        for (const auto& y : b.kraus()) kraus.push_back(wb * y);
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel compress(const QuantumChannel& ch) { return kraus_from_choi(choi(ch)); }

ComplexMatrix tensor_choi(const ChoiOperator& a, const ChoiOperator& b) {
    const SubsystemShape shape{a.dim_out(), a.dim_in(), b.dim_out(), b.dim_in()};
    return permute_subsystems(kron(a.matrix(), b.matrix()), shape, {0, 2, 1, 3});
}

QuantumChannel identity_channel(std::size_t dim) {
    if (dim == 0) throw DimensionError("identity_channel: zero dimension");
    return QuantumChannel({eye(dim)});
}

QuantumChannel unitary_channel(const ComplexMatrix& u) {
    if (!is_unitary(u)) {
        std::ostringstream os;
        os << "unitary_channel: matrix is not unitary (||U*U - I||_max = " << isometry_residual(u)
           << ")";
        throw InvalidInputError(os.str());
    }
    return QuantumChannel({u});
}

QuantumChannel depolarizing(std::size_t dim, double p) {
    if (dim == 0) throw DimensionError("depolarizing: zero dimension");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInputError("depolarizing: p outside [0, 1]");
    const auto d = idx(dim);
    const double dd = static_cast<double>(dim * dim);
    // (1/d^2) sum_{a,b} W_ab rho W_ab* = tr(rho) I / d over the Weyl operators
    // W_ab = X^a Z^b, so the identity term carries the extra weight 1 - p.
    ComplexMatrix shift = ComplexMatrix::Zero(d, d);
    ComplexMatrix clock = ComplexMatrix::Zero(d, d);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (Eigen::Index j = 0; j < d; ++j) {
        shift((j + 1) % d, j) = 1.0;
        clock(j, j) = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(d));
    }
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p + p / dd) * eye(dim));
    if (p > 0.0) {
        ComplexMatrix xa = eye(dim);
        for (Eigen::Index a = 0; a < d; ++a) {
            ComplexMatrix w = xa;
            for (Eigen::Index b = 0; b < d; ++b) {
                if (a != 0 || b != 0) kraus.push_back(std::sqrt(p / dd) * w);
                w = w * clock;
            }
            xa = shift * xa;
        }
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel constant_channel(std::size_t dim_in, const PureState& psi) {
    if (dim_in == 0) throw DimensionError("constant_channel: zero input dimension");
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(dim_in);
    for (std::size_t i = 0; i < dim_in; ++i) {
        kraus.push_back(psi.amplitudes() * basis_vector(dim_in, i).adjoint());
    }
    return QuantumChannel(std::move(kraus));
}

QuantumChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t rank,
                              std::uint64_t seed) {
    if (dim_in == 0 || dim_out == 0) throw DimensionError("random_channel: zero dimension");
    if (rank == 0 || rank > dim_in * dim_out) {
        throw InvalidInputError("random_channel: rank must lie in [1, d_in * d_out]");
    }
    if (dim_out * rank < dim_in) {
        throw InvalidInputError("random_channel: d_out * rank < d_in admits no isometry");
    }
    Rng rng(seed);
    const ComplexMatrix v = rng.haar_isometry(idx(dim_out * rank), idx(dim_in));
    std::vector<ComplexMatrix> kraus(rank, ComplexMatrix(idx(dim_out), idx(dim_in)));
    for (std::size_t k = 0; k < dim_out; ++k) {
        for (std::size_t a = 0; a < rank; ++a) kraus[a].row(idx(k)) = v.row(idx(k * rank + a));
    }
    return QuantumChannel(std::move(kraus));
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DimensionError("random_unitary: zero dimension");
    return Rng(seed).haar_unitary(idx(dim));
}

std::optional<ComplexMatrix> unitary_of(const QuantumChannel& ch) {
    if (ch.dim_in() != ch.dim_out()) return std::nullopt;
    if (ch.kraus().size() == 1) return phase_fixed(ch.kraus().front());
    const auto c = choi(ch);
    const auto eig = herm_eig(c.normalized_state().matrix());
    const auto top = eig.values.size() - 1;
    if (eig.values(top) < 1.0 - tol::kKrausCutoff) return std::nullopt;
    const double d = static_cast<double>(ch.dim_in());
    ComplexMatrix u = std::sqrt(d) * devectorize(eig.vectors.col(top), ch.dim_out(), ch.dim_in());
    if (!is_unitary(u)) return std::nullopt;
    return phase_fixed(u);
}

bool is_identity(const QuantumChannel& ch) {
    const auto u = unitary_of(ch);
    if (!u) return false;
    const auto d = u->rows();
    return max_abs(*u - ComplexMatrix::Identity(d, d)) <= tol::kUnitary;
}

}  // namespace chanfid
