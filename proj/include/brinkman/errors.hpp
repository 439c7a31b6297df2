#pragma once

#include <stdexcept>
#include <string>

namespace brinkman {

// Error taxonomy shared by all solver modules. Every condition a caller can
// recover from gets its own type; the CLI maps them onto exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParams : Error {
    using Error::Error;
};
struct CflViolation : Error {
    using Error::Error;
};
struct EmptyMask : Error {
    using Error::Error;
};
struct NoBracket : Error {
    using Error::Error;
};
struct BoundViolation : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct OutOfSpan : Error {
    using Error::Error;
};
struct NoContraction : Error {
    using Error::Error;
};
struct SeedTooClose : Error {
    using Error::Error;
};
struct BandTooWide : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace brinkman
