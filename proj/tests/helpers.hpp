#pragma once

#include <vector>

#include "chanfid/linalg.hpp"
#include "chanfid/random.hpp"
#include "chanfid/states.hpp"

namespace testutil {

// F_k = S^{-1/2} A_k* A_k S^{-1/2} with S = sum A_k* A_k.
inline chanfid::Povm random_povm(chanfid::Rng& rng, Eigen::Index n, int outcomes) {
    std::vector<chanfid::ComplexMatrix> a;
    chanfid::ComplexMatrix s = chanfid::ComplexMatrix::Zero(n, n);
    for (int k = 0; k < outcomes; ++k) {
        a.push_back(rng.gaussian_matrix(n, n));
        s += a.back().adjoint() * a.back();
    }
    const auto inv = chanfid::psd_inverse_sqrt(s);
    std::vector<chanfid::ComplexMatrix> f;
    for (const auto& x : a) {
        chanfid::ComplexMatrix e = inv * x.adjoint() * x * inv;
        f.push_back((e + e.adjoint()) / 2.0);
    }
    return chanfid::Povm(std::move(f));
}

inline chanfid::DensityMatrix random_state(chanfid::Rng& rng, Eigen::Index n, Eigen::Index rank) {
    return chanfid::DensityMatrix(rng.random_density(n, rank));
}

}  // namespace testutil
