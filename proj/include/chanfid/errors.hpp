#pragma once

#include <stdexcept>
#include <string>

namespace chanfid {

// Shapes, dimensions or index sets that do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inputs that violate a domain invariant (non-Hermitian, non-PSD, not a
// channel, out-of-range parameter).
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical certificate could not be established: two routes disagree,
// or a constructed object misses its target by more than the tolerance.
class CertificateError : public std::runtime_error {
public:
    CertificateError(const std::string& what, double gap)
        : std::runtime_error(what), gap_(gap) {}

    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

}  // namespace chanfid
