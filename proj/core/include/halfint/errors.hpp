#pragma once

#include <stdexcept>
#include <string>

namespace halfint {

// Requested data lies beyond the precision a series was computed to, or an
// operation's result would drop below a usable precision.  CLI maps this to
// exit code 3 so callers can distinguish "compute more" from a real failure.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A Hecke operator matrix failed to split into one-dimensional rational
// eigenspaces.  The message carries the characteristic polynomial of the
// offending block so the failure is diagnosable.
class EigenSplitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact identity that the library promises (and re-checks at runtime)
// did not hold.  Always a bug or corrupted input, never a tolerance issue.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace halfint
