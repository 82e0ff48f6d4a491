#include "chanfid/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "chanfid/errors.hpp"
#include "chanfid/fidelity.hpp"
#include "chanfid/random.hpp"

namespace chanfid {

namespace {

constexpr double kAscentStall = 1e-10;

std::vector<ComplexMatrix> lifted_kraus(const QuantumChannel& ch) {
    const auto n = static_cast<Eigen::Index>(ch.dim_in());
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> out;
    out.reserve(ch.kraus().size());
    for (const auto& v : ch.kraus()) out.push_back(kron(v, id));
    return out;
}

// ((S - T) (x) id) restricted to rank-one inputs, with its dual.
class DifferenceMap {
public:
    DifferenceMap(const QuantumChannel& s, const QuantumChannel& t)
        : s_(lifted_kraus(s)), t_(lifted_kraus(t)) {}

    ComplexMatrix image(const ComplexVector& psi) const {
        const auto m = s_.front().rows();
        ComplexMatrix out = ComplexMatrix::Zero(m, m);
        for (const auto& k : s_) {
            const ComplexVector v = k * psi;
            out.noalias() += v * v.adjoint();
        }
        for (const auto& k : t_) {
            const ComplexVector v = k * psi;
            out.noalias() -= v * v.adjoint();
        }
        return (out + out.adjoint()) / 2.0;
    }

    ComplexMatrix dual(const ComplexMatrix& x) const {
        const auto n = s_.front().cols();
        ComplexMatrix out = ComplexMatrix::Zero(n, n);
        for (const auto& k : s_) out.noalias() += k.adjoint() * x * k;
        for (const auto& k : t_) out.noalias() -= k.adjoint() * x * k;
        return (out + out.adjoint()) / 2.0;
    }

private:
    std::vector<ComplexMatrix> s_;
    std::vector<ComplexMatrix> t_;
};

// Alternating ascent: with P = sign(Delta(psi)), ||Delta(psi')||_1 >=
// tr(P Delta(psi')) = <psi'|Phi*(P)|psi'> >= <psi|Phi*(P)|psi> = ||Delta(psi)||_1
// when psi' is the top eigenvector of Phi*(P).
double refine_diamond(const DifferenceMap& map, ComplexVector psi, int steps) {
    // The image is Hermitian: its trace norm is sum |lambda|, and the same
    // decomposition gives the sign operator for the next step.
    auto eig = herm_eig(map.image(psi));
    double best = eig.values.cwiseAbs().sum();
    for (int step = 0; step < steps; ++step) {
        RealVector sign(eig.values.size());
        for (Eigen::Index i = 0; i < sign.size(); ++i) {
            sign(i) = eig.values(i) > 0.0 ? 1.0 : (eig.values(i) < 0.0 ? -1.0 : 0.0);
        }
        const ComplexMatrix p = eig.vectors * sign.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        const auto dual = herm_eig(map.dual(p));
        const ComplexVector next = dual.vectors.col(dual.vectors.cols() - 1);
        eig = herm_eig(map.image(next));
        const double value = eig.values.cwiseAbs().sum();
        if (value <= best + kAscentStall) {
            best = std::max(best, value);
            break;
        }
        best = value;
    }
    return best;
}

ComplexMatrix weighted_kraus(const QuantumChannel& t, const ComplexVector& weights) {
    const auto n = static_cast<Eigen::Index>(t.dim_in());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t a = 0; a < t.kraus().size(); ++a) {
        m += weights(static_cast<Eigen::Index>(a)) * t.kraus()[a];
    }
    return m;
}

ComplexVector expectations(const QuantumChannel& t, const ComplexVector& x) {
    ComplexVector out(static_cast<Eigen::Index>(t.kraus().size()));
    for (std::size_t a = 0; a < t.kraus().size(); ++a) {
        out(static_cast<Eigen::Index>(a)) = x.dot(t.kraus()[a] * x);
    }
    return out;
}

ComplexVector top_eigenvector_of_real_part(const ComplexMatrix& m) {
    const auto eig = herm_eig((m + m.adjoint()) / 2.0);
    return eig.vectors.col(eig.vectors.cols() - 1);
}

// Alternating ascent of Re sum_a <phi|V_a|phi> conj(<psi|V_a|psi>): each half
// step is an exact maximization over one of the two vectors.
double refine_off_diagonal(const QuantumChannel& t, ComplexVector phi, ComplexVector psi,
                           int steps) {
    double best = off_diagonal_objective(t, phi, psi);
    for (int step = 0; step < steps; ++step) {
        phi = top_eigenvector_of_real_part(weighted_kraus(t, expectations(t, psi).conjugate()));
        psi = top_eigenvector_of_real_part(weighted_kraus(t, expectations(t, phi).conjugate()));
        const double value = off_diagonal_objective(t, phi, psi);
        if (value <= best + kAscentStall) {
            best = std::max(best, value);
            break;
        }
        best = value;
    }
    return best;
}

void require_budget(const EstimatorBudget& b) {
    if (b.restarts < 0 || b.ascent_steps < 0) {
        throw InvalidInputError("estimator budget must be nonnegative");
    }
}

}  // namespace

double diamond_objective(const QuantumChannel& s, const QuantumChannel& t,
                         const ComplexVector& psi) {
    if (s.dim_in() != t.dim_in() || s.dim_out() != t.dim_out()) {
        throw DimensionError("diamond_objective: channel dimensions differ");
    }
    if (static_cast<std::size_t>(psi.size()) != s.dim_in() * s.dim_in()) {
        throw DimensionError("diamond_objective: input must live on H (x) H");
    }
    return trace_norm(DifferenceMap(s, t).image(psi));
}

double diamond_lower_bound(const QuantumChannel& s, const QuantumChannel& t,
                           const EstimatorBudget& budget) {
    if (s.dim_in() != t.dim_in() || s.dim_out() != t.dim_out()) {
        throw DimensionError("diamond_lower_bound: channel dimensions differ");
    }
    require_budget(budget);
    const DifferenceMap map(s, t);
    const auto d = static_cast<Eigen::Index>(s.dim_in());
    const ComplexVector phi = vectorize(ComplexMatrix::Identity(d, d)) / std::sqrt(static_cast<double>(d));

    double best = trace_norm(map.image(phi));
    best = std::max(best, refine_diamond(map, phi, budget.ascent_steps));
    for (int i = 0; i < budget.restarts; ++i) {
        Rng rng(derive_seed(budget.seed, static_cast<std::uint64_t>(i)));
        best = std::max(best, refine_diamond(map, rng.unit_vector(d * d), budget.ascent_steps));
    }
    return best;
}

double off_diagonal_objective(const QuantumChannel& t, const ComplexVector& phi,
                              const ComplexVector& psi) {
    if (t.dim_in() != t.dim_out()) throw DimensionError("off-diagonal fidelity: channel is not square");
    const auto n = static_cast<Eigen::Index>(t.dim_in());
    if (phi.size() != n || psi.size() != n) throw DimensionError("off-diagonal fidelity: vector size");
    const ComplexMatrix out = apply_linear(t, phi * psi.adjoint());
    return phi.dot(out * psi).real();
}

double off_diagonal_fidelity_lb(const QuantumChannel& t, const EstimatorBudget& budget) {
    if (t.dim_in() != t.dim_out()) {
        throw DimensionError("off_diagonal_fidelity_lb: channel is not square");
    }
    require_budget(budget);
    const auto n = static_cast<Eigen::Index>(t.dim_in());
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const ComplexVector e = basis_vector(t.dim_in(), static_cast<std::size_t>(i));
        best = std::max(best, off_diagonal_objective(t, e, e));
        best = std::max(best, refine_off_diagonal(t, e, e, budget.ascent_steps));
    }
    for (int i = 0; i < budget.restarts; ++i) {
        Rng rng(derive_seed(budget.seed, static_cast<std::uint64_t>(i)));
        const ComplexVector phi = rng.unit_vector(n);
        const ComplexVector psi = rng.unit_vector(n);
        best = std::max(best, off_diagonal_objective(t, phi, psi));
        best = std::max(best, refine_off_diagonal(t, phi, psi, budget.ascent_steps));
    }
    return best;
}

bool BoundReport::asserted_hold() const {
    return std::all_of(inequalities.begin(), inequalities.end(),
                       [](const auto& q) { return !q.asserted || q.satisfied; });
}

BoundReport bound_suite(const QuantumChannel& s, const QuantumChannel& t,
                        const EstimatorBudget& budget) {
    BoundReport r;
    r.fid = choi_fidelity(s, t);
    r.choi_trace_distance =
        trace_distance(choi(s).normalized_state(), choi(t).normalized_state());
    r.diamond_lb = diamond_lower_bound(s, t, budget);

    auto add = [&](std::string name, double lhs, double rhs, bool asserted) {
        r.inequalities.push_back({std::move(name), lhs, rhs, lhs <= rhs + kBoundSlack, asserted});
    };

    add("2-2sqrt(F(S,T)) <= ||rho_S-rho_T||_1", 2.0 - 2.0 * std::sqrt(r.fid),
        r.choi_trace_distance, true);
    add("||rho_S-rho_T||_1 <= diamond_lb(S,T)", r.choi_trace_distance, r.diamond_lb, true);

    if (t.dim_in() == t.dim_out()) {
        const auto id = identity_channel(t.dim_in());
        r.fid_to_identity = choi_fidelity(t, id);
        r.diamond_lb_identity = diamond_lower_bound(t, id, budget);
        r.offdiag_lb = off_diagonal_fidelity_lb(t, budget);
        const double lb = r.diamond_lb_identity;
        // diag(-1, 1, ..., 1) breaks both of these from d = 15 on.
        const bool small = t.dim_in() < kUpperBoundMaxDim;
        add("diamond_lb(T,id) <= 4sqrt(1-F(T,id))", lb,
            4.0 * std::sqrt(std::max(0.0, 1.0 - r.fid_to_identity)), small);
        add("F(T,id) <= 1-diamond_lb(T,id)^2/16", r.fid_to_identity, 1.0 - lb * lb / 16.0, small);
        add("(1-diamond_lb(T,id)/2)^2 <= F(T,id)", (1.0 - lb / 2.0) * (1.0 - lb / 2.0),
            r.fid_to_identity, false);
    }
    return r;
}

}  // namespace chanfid
