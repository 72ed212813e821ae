#pragma once

#include <stdexcept>

namespace forcefield {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

/// Malformed header or framing in one of the text formats.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace forcefield
