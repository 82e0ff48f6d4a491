#include "chanfid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanfid/errors.hpp"
#include "chanfid/random.hpp"

namespace chanfid {

namespace {

constexpr double kUnitaryReduction = 1e-10;

void require_same_dims(const QuantumChannel& s, const QuantumChannel& t, const char* op) {
    if (s.dim_in() != t.dim_in() || s.dim_out() != t.dim_out()) {
        std::ostringstream os;
        os << op << ": channels map " << s.dim_in() << "->" << s.dim_out() << " and "
           << t.dim_in() << "->" << t.dim_out();
        throw DimensionError(os.str());
    }
}

double sq(double x) { return x * x; }

PropertyCheck equality(std::string name, double lhs, double rhs, double tol) {
    return {std::move(name), lhs, rhs, tol, std::abs(lhs - rhs) <= tol, CheckKind::Equality};
}

PropertyCheck at_least(std::string name, double lhs, double rhs, double slack) {
    return {std::move(name), lhs, rhs, slack, lhs >= rhs - slack, CheckKind::AtLeast};
}

}  // namespace

std::string_view to_string(FidelityRoute route) {
    switch (route) {
        case FidelityRoute::ChoiState: return "choi-state";
        case FidelityRoute::ClosedFormIdentity: return "closed-form-identity";
        case FidelityRoute::ClosedFormUnitary: return "closed-form-unitary";
        case FidelityRoute::Dilation: return "dilation";
    }
    return "unknown";
}

double choi_fidelity(const QuantumChannel& s, const QuantumChannel& t) {
    require_same_dims(s, t, "channel_fidelity");
    return state_fidelity(choi(s).normalized_state(), choi(t).normalized_state());
}

double fidelity_to_identity(const QuantumChannel& t) {
    if (t.dim_in() != t.dim_out()) {
        throw DimensionError("fidelity_to_identity: channel is not square");
    }
    const double d = static_cast<double>(t.dim_in());
    double total = 0.0;
    for (const auto& v : t.kraus()) total += std::norm(v.trace());
    return std::min(1.0, total / (d * d));
}

double unitary_pair_fidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw DimensionError("unitary_pair_fidelity: unitaries of different sizes");
    }
    if (!is_unitary(u) || !is_unitary(v)) {
        throw InvalidInputError("unitary_pair_fidelity: input is not unitary within 1e-8");
    }
    const double d = static_cast<double>(u.rows());
    const double closed = std::min(1.0, std::norm((u.adjoint() * v).trace()) / (d * d));
    const double reduced = fidelity_to_identity(QuantumChannel({u.adjoint() * v}));
    const double gap = std::abs(closed - reduced);
    if (gap > kUnitaryReduction) {
        throw CertificateError("unitary_pair_fidelity: reduction to F(U*V, id) failed", gap);
    }
    return closed;
}

double dilation_fidelity(const QuantumChannel& s, const QuantumChannel& t) {
    require_same_dims(s, t, "dilation_fidelity");
    const std::size_t n = std::max(s.kraus().size(), t.kraus().size());
    const auto v = stinespring(t, n);
    const auto w = stinespring(s, n);
    const ComplexMatrix reduced = partial_trace(w.matrix() * v.matrix().adjoint(),
                                                SubsystemShape{t.dim_out(), n}, {1});
    const double d = static_cast<double>(t.dim_in());
    return std::clamp(sq(trace_norm(reduced)) / (d * d), 0.0, 1.0);
}

FidelityReport channel_fidelity(const QuantumChannel& s, const QuantumChannel& t) {
    const double choi_value = choi_fidelity(s, t);
    const double dilation_value = dilation_fidelity(s, t);
    FidelityReport report{choi_value, FidelityRoute::ChoiState,
                          std::abs(choi_value - dilation_value)};

    auto use_closed_form = [&](double closed, FidelityRoute route) {
        report.value = closed;
        report.route = route;
        report.residual = std::max({report.residual, std::abs(closed - choi_value),
                                    std::abs(closed - dilation_value)});
    };

    if (s.dim_in() == s.dim_out()) {
        const auto us = unitary_of(s);
        const auto ut = unitary_of(t);
        const auto d = static_cast<Eigen::Index>(s.dim_in());
        const ComplexMatrix id = ComplexMatrix::Identity(d, d);
        const bool s_is_id = us && max_abs(*us - id) <= tol::kUnitary;
        const bool t_is_id = ut && max_abs(*ut - id) <= tol::kUnitary;
        if (us && ut && !s_is_id && !t_is_id) {
            use_closed_form(unitary_pair_fidelity(*us, *ut), FidelityRoute::ClosedFormUnitary);
        } else if (t_is_id) {
            use_closed_form(fidelity_to_identity(s), FidelityRoute::ClosedFormIdentity);
        } else if (s_is_id) {
            use_closed_form(fidelity_to_identity(t), FidelityRoute::ClosedFormIdentity);
        }
    }

    if (report.residual > kRouteAgreement) {
        std::ostringstream os;
        os << "channel_fidelity: routes disagree by " << report.residual;
        throw CertificateError(os.str(), report.residual);
    }
    return report;
}

PropertyInputs seeded_property_inputs(const QuantumChannel& s, const QuantumChannel& t,
                                      std::uint64_t seed) {
    if (s.dim_in() != t.dim_in() || s.dim_out() != t.dim_out()) {
        throw DimensionError("property inputs: S and T must share their shape");
    }
    const auto din = s.dim_in(), dout = s.dim_out();
    return PropertyInputs{s,
                          t,
                          s,
                          random_channel(din, dout, 2, derive_seed(seed, 1)),
                          t,
                          random_channel(din, dout, 2, derive_seed(seed, 2)),
                          random_channel(dout, dout, 2, derive_seed(seed, 3)),
                          random_unitary(dout, derive_seed(seed, 4)),
                          random_unitary(dout, derive_seed(seed, 5)),
                          0.5};
}

std::vector<PropertyCheck> cf_property_suite(const PropertyInputs& in) {
    std::vector<PropertyCheck> out;

    const auto rho_s = choi(in.s).normalized_state();
    const auto rho_t = choi(in.t).normalized_state();
    const double f_st = state_fidelity(rho_s, rho_t);
    const double f_ts = state_fidelity(rho_t, rho_s);
    const double dist = trace_distance(rho_s, rho_t);

    {
        // F = 1 iff the Choi states coincide, stated as the two implications
        // that survive roundoff.
        const bool in_range = f_st >= 0.0 && f_st <= 1.0;
        const bool equal_implies_one = !(dist <= 1e-8) || f_st >= 1.0 - 1e-8;
        const bool one_implies_equal = !(f_st >= 1.0 - 1e-12) || dist <= 2e-6 + 1e-9;
        out.push_back({"CF1 range and faithfulness", f_st, dist, 1e-8,
                       in_range && equal_implies_one && one_implies_equal});
    }

    out.push_back(equality("CF2 symmetry", f_st, f_ts, 1e-10));

    {
        const double d = static_cast<double>(in.u.rows());
        const double closed = std::norm((in.u.adjoint() * in.v).trace()) / (d * d);
        out.push_back(equality("CF3 unitary closed form",
                               choi_fidelity(unitary_channel(in.u), unitary_channel(in.v)), closed,
                               1e-9));
    }

    {
        const auto mixed = mixture(in.lambda, in.t1, in.t2);
        const double lhs = choi_fidelity(in.s, mixed);
        const double rhs = in.lambda * choi_fidelity(in.s, in.t1) +
                           (1.0 - in.lambda) * choi_fidelity(in.s, in.t2);
        out.push_back(at_least("CF4 concavity", lhs, rhs, 1e-9));
    }

    {
        const double lhs = choi_fidelity(tensor(in.s1, in.s2), tensor(in.t1, in.t2));
        const double rhs = choi_fidelity(in.s1, in.t1) * choi_fidelity(in.s2, in.t2);
        out.push_back(equality("CF5 multiplicativity", lhs, rhs, 1e-8));
    }

    {
        const auto post = unitary_channel(in.u);
        const double lhs = choi_fidelity(compose(post, in.s), compose(post, in.t));
        out.push_back(equality("CF6 unitary post-composition", lhs, f_st, 1e-9));
    }

    {
        const double lhs = choi_fidelity(compress(compose(in.r, in.s)), compress(compose(in.r, in.t)));
        out.push_back(at_least("CF7 monotonicity", lhs, f_st, 1e-9));
    }

    return out;
}

bool PropertyCheck::holds_within(double tol) const {
    const double t = std::min(tol, tolerance);
    switch (kind) {
        case CheckKind::Equality: return std::abs(lhs - rhs) <= t;
        case CheckKind::AtLeast: return lhs >= rhs - t;
        case CheckKind::Predicate: break;
    }
    return passed;
}

bool all_passed(const std::vector<PropertyCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

}  // namespace chanfid
