#include "chanfid/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chanfid/errors.hpp"
#include "chanfid/fidelity.hpp"

namespace chanfid {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTol = 1e-12;
constexpr double kResidualCertificate = 1e-9;
constexpr int kMaxCopies = 20;
// Largest copy count whose Choi operators (4^N square) are built explicitly.
constexpr int kExplicitChoiCopies = 4;
constexpr int kExplicitStateCopies = 8;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

std::vector<double> phase_angles(int n, double theta) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out.push_back(wrap((n - 2 * k) * theta));
    return out;
}

struct Support {
    std::vector<int> ks;
    std::vector<double> weights;
};

// Smallest convex combination (two antipodal points, else a triangle) of
// the phase points that hits the origin. Lexicographically first in k.
std::optional<Support> convex_support(const std::vector<double>& angles) {
    const int count = static_cast<int>(angles.size());
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            const double diff = std::abs(wrap(angles[i] - angles[j]) - kPi);
            if (diff <= 1e-9) return Support{{i, j}, {0.5, 0.5}};
        }
    }
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            for (int k = j + 1; k < count; ++k) {
                Eigen::Matrix3d a;
                a << std::cos(angles[i]), std::cos(angles[j]), std::cos(angles[k]),
                    std::sin(angles[i]), std::sin(angles[j]), std::sin(angles[k]), 1.0, 1.0, 1.0;
                if (std::abs(a.determinant()) < 1e-12) continue;
                Eigen::Vector3d x = a.fullPivLu().solve(Eigen::Vector3d(0.0, 0.0, 1.0));
                if (x.minCoeff() < -1e-12) continue;
                x = x.cwiseMax(0.0);
                x /= x.sum();
                return Support{{i, j, k}, {x(0), x(1), x(2)}};
            }
        }
    }
    return std::nullopt;
}

// |s_k> = a^{(x)(n-k)} (x) b^{(x)k}, stored as its per-factor vectors.
std::vector<ComplexVector> product_factors(int n, int k, const ComplexVector& a,
                                           const ComplexVector& b) {
    std::vector<ComplexVector> f;
    f.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f.push_back(i < n - k ? a : b);
    return f;
}

ComplexVector flatten(const std::vector<ComplexVector>& factors) {
    ComplexVector v = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        v = kron(ComplexMatrix(v), ComplexMatrix(factors[i])).col(0);
    }
    return v;
}

}  // namespace

bool origin_in_hull(const std::vector<double>& angles, double* max_gap) {
    std::vector<double> a;
    for (double x : angles) a.push_back(wrap(x));
    std::sort(a.begin(), a.end());
    double gap = 0.0;
    if (a.empty()) {
        gap = kTwoPi;
    } else {
        for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
        gap = std::max(gap, a.front() + kTwoPi - a.back());
    }
    if (max_gap) *max_gap = gap;
    return gap <= kPi + kAngleTol;
}

AcinSearch acin_search(const ComplexMatrix& u1, const ComplexMatrix& u2, int n_max) {
    if (u1.rows() != 2 || u1.cols() != 2 || u2.rows() != 2 || u2.cols() != 2) {
        throw DimensionError("acin_search: expects two 2x2 unitaries");
    }
    if (!is_unitary(u1) || !is_unitary(u2)) {
        throw InvalidInputError("acin_search: inputs must be unitary within 1e-8");
    }
    if (n_max < 1 || n_max > kMaxCopies) {
        throw InvalidInputError("acin_search: n_max must lie in [1, 20]");
    }

    const ComplexMatrix w = u1.adjoint() * u2;
    const ComplexMatrix w_su = w / std::sqrt(w.determinant());
    const double cos_theta = std::clamp(w_su.trace().real() / 2.0, -1.0, 1.0);
    const double theta = std::acos(cos_theta);
    if (theta < 1e-9 || theta > kPi - 1e-9) {
        throw InvalidInputError("acin_search: U1 and U2 coincide up to a phase");
    }
    // W_su = cos(theta) I + i K with K Hermitian of eigenvalues -+sin(theta).
    const ComplexMatrix k_part = (w_su - w_su.adjoint()) / Complex(0.0, 2.0);
    const auto eig = herm_eig(k_part);
    const ComplexVector minus = eig.vectors.col(0);  // phase e^{-i theta}
    const ComplexVector plus = eig.vectors.col(1);   // phase e^{+i theta}

    AcinSearch search;
    for (int n = 1; n <= n_max; ++n) {
        const auto angles = phase_angles(n, theta);
        double gap = 0.0;
        if (!origin_in_hull(angles, &gap)) {
            search.excluded.push_back({n, gap});
            continue;
        }
        const auto support = convex_support(angles);
        if (!support) {
            throw CertificateError("acin_search: hull contains 0 but no support was found", 0.0);
        }

        const auto& ks = support->ks;
        const auto& weights = support->weights;
        std::vector<std::vector<ComplexVector>> terms;
        for (int k : ks) terms.push_back(product_factors(n, k, plus, minus));

        // <Psi|W^{(x)n}|Psi> factor by factor, with the unnormalized W.
        Complex overlap = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (std::size_t j = 0; j < terms.size(); ++j) {
                Complex prod = std::sqrt(weights[i] * weights[j]);
                for (int f = 0; f < n; ++f) prod *= terms[i][f].dot(w * terms[j][f]);
                overlap += prod;
            }
        }

        ComplexVector amplitudes = ComplexVector::Zero(Eigen::Index{1} << n);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            amplitudes += std::sqrt(weights[i]) * flatten(terms[i]);
        }
        amplitudes /= amplitudes.norm();
        PureState psi(amplitudes);

        double residual = std::abs(overlap);
        if (n <= kExplicitStateCopies) {
            residual = std::max(residual, std::abs(amplitudes.dot(kron_power(w, n) * amplitudes)));
        }
        if (residual > kResidualCertificate) {
            std::ostringstream os;
            os << "acin_search: residual " << residual << " at N = " << n;
            throw CertificateError(os.str(), residual);
        }
        double fidelity_after = residual * residual;  // Choi states |U^{(x)n} Psi><..| (x) I / 2^n
        if (n <= kExplicitChoiCopies) {
            const auto prep = constant_channel(static_cast<std::size_t>(amplitudes.size()), psi);
            fidelity_after = choi_fidelity(compose(unitary_channel(kron_power(u1, n)), prep),
                                           compose(unitary_channel(kron_power(u2, n)), prep));
        }
        search.found = AcinResult{n,        theta,    ks,           weights,
                                  psi,      residual, fidelity_after, search.excluded};
        return search;
    }
    return search;
}

TensorPowerFidelity tensor_power_fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2, int n) {
    if (n < 1) throw InvalidInputError("tensor_power_fidelity: N must be at least 1");
    TensorPowerFidelity out;
    out.value = std::pow(unitary_pair_fidelity(u1, u2), n);
    const double states = std::pow(static_cast<double>(u1.rows()), n);
    if (n <= kExplicitChoiCopies && states <= 16.0) {
        const double explicit_value = choi_fidelity(unitary_channel(kron_power(u1, n)),
                                                    unitary_channel(kron_power(u2, n)));
        out.cross_checked = true;
        out.residual = std::abs(explicit_value - out.value);
        if (out.residual > 1e-9) {
            throw CertificateError("tensor_power_fidelity: explicit tensor route disagrees",
                                   out.residual);
        }
    }
    return out;
}

}  // namespace chanfid
