#pragma once

#include <stdexcept>
#include <string>

namespace toposeg {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments or violated preconditions (shape mismatch, out-of-range
// values, malformed configuration). Maps to CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// File system and format problems (missing file, truncated stream,
// unsupported encoding). Maps to CLI exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace toposeg
