#pragma once

#include <stdexcept>
#include <string>

namespace los {

// Error categories map onto CLI exit codes: input/validation -> 2,
// schema/level mismatch -> 3, numerical failure -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct LookupError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

}  // namespace los
