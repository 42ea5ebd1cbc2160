#pragma once

#include <stdexcept>
#include <string>

namespace relsim {

/// Base for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data: malformed files, invalid patterns, mismatched hashes.
class DataError : public Error {
public:
    using Error::Error;
};

/// A count provider or the count cache failed.
class ProviderError : public Error {
public:
    using Error::Error;
};

/// Malformed invocation (bad flag values that CLI11 cannot see).
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace relsim
