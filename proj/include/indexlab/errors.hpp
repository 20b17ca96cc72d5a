#pragma once

#include <stdexcept>
#include <string>

namespace indexlab {

// Base of all numeric domain errors. The CLI maps these to exit code 3.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mobius action produced a point with Im z <= 0 (numerically degenerate matrix).
struct HyperbolicDomainError : DomainError {
    using DomainError::DomainError;
};

// Barycentric coordinates invalid (sum != 1) or chart recursion degenerate.
struct DegenerateCoordinateError : DomainError {
    using DomainError::DomainError;
};

// A truncated integration box does not cover the support it must cover.
struct TruncationError : DomainError {
    using DomainError::DomainError;
};

// Normalization integral of a cut-off fell below threshold.
struct ZeroDenominatorError : DomainError {
    using DomainError::DomainError;
};

// Convolution support escapes the lattice box; truncating would corrupt
// algebra identities.
struct BoxOverflowError : DomainError {
    using DomainError::DomainError;
};

// An alleged idempotent fails ||p^2 - p|| <= tolerance.
struct NotIdempotentError : DomainError {
    using DomainError::DomainError;
};

// No graded piece of a characteristic form completes the top degree.
struct DegreeMismatchError : DomainError {
    using DomainError::DomainError;
};

}  // namespace indexlab
