#pragma once

#include <stdexcept>
#include <string>

namespace cstar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input matrix is not Hermitian within the relative tolerance.
struct NotHermitian : Error {
    using Error::Error;
};

/// An iterative routine exhausted its iteration cap without reaching a
/// certificate; the result is indeterminate, not a verdict.
struct NoConvergence : Error {
    using Error::Error;
};

/// Operation requires a nonzero matrix.
struct ZeroMatrix : Error {
    using Error::Error;
};

/// Operation requires a nonzero function.
struct ZeroFunction : Error {
    using Error::Error;
};

/// Operand shapes are inconsistent.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Spectral cutoff width must stay below the operator norm.
struct EpsTooLarge : Error {
    using Error::Error;
};

/// Level-set width must stay below the sup norm.
struct DeltaTooLarge : Error {
    using Error::Error;
};

/// Supplied state does not attain the norm (or is not a density matrix).
struct NotAMaximizer : Error {
    using Error::Error;
};

/// Malformed argument outside the categories above (bad tolerance config,
/// non-finite entries, out-of-range parameters).
struct InvalidArgument : Error {
    using Error::Error;
};

} // namespace cstar
