#pragma once

// NMEA 0183 depth sentence handling for DBT and DPT.

#include <string>
#include <string_view>

#include "forcefield/errors.hpp"

namespace forcefield {

struct InvalidChar : Error {
    using Error::Error;
};
struct ChecksumMismatch : Error {
    using Error::Error;
};
struct UnsupportedSentence : Error {
    using Error::Error;
};
struct MissingDepthField : Error {
    using Error::Error;
};
struct NonPositiveDepth : Error {
    using Error::Error;
};

/// XOR of all bytes between '$' and '*', as two uppercase hex digits.
/// The body must be printable ASCII and contain neither '$' nor '*'.
std::string nmea_checksum(std::string_view body);

/// Wrap a body into a full "$<body>*<checksum>" sentence.
std::string nmea_frame(std::string_view body);

/// Extract the depth in meters from a DBT or DPT sentence.
/// Verifies the checksum before looking at any field.
double parse_nmea_depth(std::string_view sentence);

}  // namespace forcefield
