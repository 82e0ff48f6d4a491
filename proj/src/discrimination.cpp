#include "chanfid/discrimination.hpp"

#include <cmath>
#include <sstream>

#include "chanfid/errors.hpp"
#include "chanfid/fidelity.hpp"

namespace chanfid {

namespace {

constexpr double kInvGolden = 0.6180339887498948482;
constexpr double kRefineWidth = 1e-9;

void check_pair(const HamiltonianEnsemble& ens, std::size_t m, std::size_t n) {
    const auto size = ens.hamiltonians.size();
    if (m >= size || n >= size) {
        throw DimensionError("Hamiltonian index out of range");
    }
    if (m == n) throw InvalidInputError("pairwise fidelity needs two distinct members");
}

// Minimizes f on [lo, hi] by golden-section search; returns (t, f(t)).
template <class F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, double width) {
    double a = lo, b = hi;
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > width) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

void HamiltonianEnsemble::validate() const {
    if (dim == 0) throw DimensionError("HamiltonianEnsemble: zero dimension");
    if (hamiltonians.size() < 2) throw InvalidInputError("HamiltonianEnsemble: need at least two members");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidInputError("HamiltonianEnsemble: horizon must be positive and finite");
    }
    if (grid_points < 2) throw InvalidInputError("HamiltonianEnsemble: need at least two grid points");
    for (std::size_t i = 0; i < hamiltonians.size(); ++i) {
        const auto& h = hamiltonians[i];
        if (h.rows() != static_cast<Eigen::Index>(dim) || h.cols() != static_cast<Eigen::Index>(dim)) {
            throw DimensionError("HamiltonianEnsemble: member " + std::to_string(i) +
                                 " has the wrong shape");
        }
        const double res = hermiticity_residual(h);
        if (res > tol::kHermitian) {
            std::ostringstream os;
            os << "HamiltonianEnsemble: member " << i << " is not Hermitian (residual " << res << ")";
            throw InvalidInputError(os.str());
        }
    }
}

double pairwise_fidelity_at(const HamiltonianEnsemble& ens, std::size_t m, std::size_t n, double t) {
    check_pair(ens, m, n);
    return unitary_pair_fidelity(herm_exp(ens.hamiltonians[m], t), herm_exp(ens.hamiltonians[n], t));
}

double difference_exponent_fidelity(const HamiltonianEnsemble& ens, std::size_t m, std::size_t n,
                                    double t) {
    check_pair(ens, m, n);
    const double d = static_cast<double>(ens.dim);
    const ComplexMatrix u = herm_exp(ens.hamiltonians[m] - ens.hamiltonians[n], t);
    return std::norm(u.trace()) / (d * d);
}

std::pair<double, std::pair<std::size_t, std::size_t>> max_pairwise_fidelity(
    const HamiltonianEnsemble& ens, double t) {
    std::vector<ComplexMatrix> u;
    u.reserve(ens.hamiltonians.size());
    for (const auto& h : ens.hamiltonians) u.push_back(herm_exp(h, t));
    double best = -1.0;
    std::pair<std::size_t, std::size_t> arg{0, 1};
    for (std::size_t m = 0; m < u.size(); ++m) {
        for (std::size_t n = m + 1; n < u.size(); ++n) {
            const double f = unitary_pair_fidelity(u[m], u[n]);
            if (f > best) {
                best = f;
                arg = {m, n};
            }
        }
    }
    return {best, arg};
}

DiscriminationResult optimize_discrimination(const HamiltonianEnsemble& ens) {
    ens.validate();
    DiscriminationResult out;
    const std::size_t n = ens.grid_points;
    const double step = ens.horizon / static_cast<double>(n - 1);
    std::size_t best = 0;
    out.curve.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i + 1 == n ? ens.horizon : step * static_cast<double>(i);
        const auto [f, pair] = max_pairwise_fidelity(ens, t);
        out.curve.emplace_back(t, f);
        if (f < out.curve[best].second) best = i;
    }
    out.t_opt = out.curve[best].first;
    out.f_opt = out.curve[best].second;

    const double lo = best == 0 ? 0.0 : out.curve[best - 1].first;
    const double hi = best + 1 == n ? ens.horizon : out.curve[best + 1].first;
    const auto [t_ref, f_ref] = golden_section(
        [&](double t) { return max_pairwise_fidelity(ens, t).first; }, lo, hi,
        kRefineWidth * ens.horizon);
    if (f_ref < out.f_opt) {
        out.t_opt = t_ref;
        out.f_opt = f_ref;
    }
    out.worst_pair = max_pairwise_fidelity(ens, out.t_opt).second;
    return out;
}

DiscriminationResult optimize_discrimination_discrete(const HamiltonianEnsemble& ens, double tau) {
    ens.validate();
    if (!(tau > 0.0)) throw InvalidInputError("discrete discrimination: tau must be positive");
    DiscriminationResult out;
    const auto steps = static_cast<std::size_t>(std::floor(ens.horizon / tau + 1e-12));
    std::size_t best = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = tau * static_cast<double>(k);
        const auto [f, pair] = max_pairwise_fidelity(ens, t);
        out.curve.emplace_back(t, f);
        if (f < out.curve[best].second) best = k;
    }
    out.t_opt = out.curve[best].first;
    out.f_opt = out.curve[best].second;
    out.worst_pair = max_pairwise_fidelity(ens, out.t_opt).second;
    return out;
}

DiscriminationResult discrete_channel_discrimination(const std::vector<QuantumChannel>& steps,
                                                     std::size_t n_max) {
    if (steps.size() < 2) throw InvalidInputError("discrete discrimination: need at least two channels");
    if (n_max < 1) throw InvalidInputError("discrete discrimination: n_max must be at least 1");
    for (const auto& ch : steps) {
        if (ch.dim_in() != ch.dim_out() || ch.dim_in() != steps.front().dim_in()) {
            throw DimensionError("discrete discrimination: channels must share one square dimension");
        }
    }
    DiscriminationResult out;
    std::vector<QuantumChannel> powers = steps;
    std::size_t best = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            for (std::size_t m = 0; m < steps.size(); ++m) {
                powers[m] = compress(compose(steps[m], powers[m]));
            }
        }
        double worst = -1.0;
        std::pair<std::size_t, std::size_t> arg{0, 1};
        for (std::size_t a = 0; a < powers.size(); ++a) {
            for (std::size_t b = a + 1; b < powers.size(); ++b) {
                const double f = choi_fidelity(powers[a], powers[b]);
                if (f > worst) {
                    worst = f;
                    arg = {a, b};
                }
            }
        }
        out.curve.emplace_back(static_cast<double>(n), worst);
        if (n == 1 || worst < out.curve[best].second) {
            best = n - 1;
            out.worst_pair = arg;
        }
    }
    out.t_opt = out.curve[best].first;
    out.f_opt = out.curve[best].second;
    return out;
}

}  // namespace chanfid
