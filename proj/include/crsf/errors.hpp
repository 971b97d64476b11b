#pragma once

#include <stdexcept>
#include <string>

namespace crsf {

// Error taxonomy mirrors the CLI exit codes: numeric failures exit 1,
// malformed input exits 2, enumeration guards exit 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

struct GuardError : Error {
    using Error::Error;
};

} // namespace crsf
