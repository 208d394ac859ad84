#pragma once

#include <stdexcept>
#include <string>

namespace borndev {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument to a constructor or operation (out-of-domain parameter).
struct InvalidParameter : Error {
    using Error::Error;
};

// Iterative scheme hit its subdivision or iteration cap.
struct NonConvergence : Error {
    using Error::Error;
};

// An integrand produced NaN or infinity.
struct NonFinite : Error {
    using Error::Error;
};

// Tabulated state with zero norm before normalization.
struct ZeroNorm : Error {
    using Error::Error;
};

// First-order probability left [0,1] by more than the allowed slack.
struct OutOfRange : Error {
    using Error::Error;
};

// Sampler support collapsed to zero width.
struct DegenerateSupport : Error {
    using Error::Error;
};

// Malformed CLI configuration (maps to exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace borndev
