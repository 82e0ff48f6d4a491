#include "chanfid/random.hpp"

#include <cmath>
#include <numbers>

#include "chanfid/errors.hpp"

namespace chanfid {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over a golden-ratio stride
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

ComplexMatrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
    }
    return g;
}

ComplexVector Rng::gaussian_vector(Eigen::Index n) { return gaussian_matrix(n, 1).col(0); }

ComplexVector Rng::unit_vector(Eigen::Index n) {
    ComplexVector v = gaussian_vector(n);
    return v / v.norm();
}

ComplexMatrix Rng::haar_isometry(Eigen::Index rows, Eigen::Index cols) {
    if (rows < cols || cols < 1) throw DimensionError("haar_isometry: need rows >= cols >= 1");
    const ComplexMatrix g = gaussian_matrix(rows, cols);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

ComplexMatrix Rng::random_density(Eigen::Index n, Eigen::Index rank) {
    const ComplexMatrix g = gaussian_matrix(n, rank);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) / 2.0;
}

}  // namespace chanfid
