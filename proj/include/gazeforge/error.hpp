#pragma once

#include <stdexcept>
#include <string>

namespace gazeforge {

/// Base of every error thrown by the library. The CLI maps the subclass onto
/// an exit code, so keep new errors inside this hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter, distribution bound or configuration value.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Sequence ordering rules that cannot be satisfied.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Gaze mapping failed (no target available, no fixations to remap, ...).
class MappingError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate or failed numeric procedure.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed input text or bytes. The message carries the position.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (missing file, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace gazeforge
