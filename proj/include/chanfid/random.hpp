#pragma once

// Seeded sampling. Everything here is built on std::mt19937_64 with a
// hand-rolled Box-Muller transform, so a given seed produces the same
// numbers on every conforming standard library.

#include <cstdint>
#include <random>

#include "chanfid/linalg.hpp"

namespace chanfid {

/// Derives an independent stream seed from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double normal();
    Complex complex_normal();

    ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
    ComplexVector gaussian_vector(Eigen::Index n);
    ComplexVector unit_vector(Eigen::Index n);

    /// Haar-distributed rows x cols isometry (rows >= cols): QR of a complex
    /// Gaussian matrix with the phases of R's diagonal fixed.
    ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols);
    ComplexMatrix haar_unitary(Eigen::Index n) { return haar_isometry(n, n); }

    /// Density matrix drawn as G G* / tr(G G*) with G of shape n x rank.
    ComplexMatrix random_density(Eigen::Index n, Eigen::Index rank);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace chanfid
